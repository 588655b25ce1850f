use catenary_core::curvature::{criterion_sweep, criterion_sweep_sequential};
use catenary_core::integrator::{trace_many, trace_many_sequential, CatenaryState, TraceOptions};
use catenary_core::roots::{log_grid, roots_on_grid, roots_on_grid_sequential};
use catenary_core::validation::random_jets;
use catenary_core::SurfaceSpec;

#[test]
fn jet_sweeps_match() {
    let spec = SurfaceSpec::catenoid();
    let jets = random_jets(&spec, 1.5, 20_000, 11);
    assert_eq!(
        criterion_sweep(&spec, 1.5, &jets),
        criterion_sweep_sequential(&spec, 1.5, &jets)
    );
}

#[test]
fn trace_fans_match() {
    let spec = SurfaceSpec::sphere();
    let starts: Vec<_> = (0..48)
        .map(|k| CatenaryState::new(0.3 + 0.01 * k as f64, 0.0, 0.1 * k as f64))
        .collect();
    let opts = TraceOptions::new(1e-9);
    let a = trace_many(&spec, 1.0, &starts, 20.0, &opts);
    let b = trace_many_sequential(&spec, 1.0, &starts, 20.0, &opts);
    for (x, y) in a.iter().zip(&b) {
        let (x, y) = (x.as_ref().unwrap(), y.as_ref().unwrap());
        assert_eq!(x.samples, y.samples);
        assert_eq!(x.termination, y.termination);
    }
}

#[test]
fn grid_scans_match() {
    let grid = log_grid(1e-3, 1e3, 1000);
    let f = |u: f64| (u.ln() * 3.0).sin();
    assert_eq!(
        roots_on_grid(f, &grid, 0.0, 1e-12),
        roots_on_grid_sequential(f, &grid, 0.0, 1e-12)
    );
}
