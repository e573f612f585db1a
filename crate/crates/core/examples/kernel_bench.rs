//! Quick timing probe for the integrator kernel at the bundled model sizes.

use std::time::Instant;

use twistqa_core::models::{transverse_field_driver, AnnealConfig, AnnealSchedule, TwistAngles};
use twistqa_core::variational::EnergyEvaluator;
use twistqa_core::{deformed_spin_star, evolve, ground_state_density, hydrogen_hamiltonian};

fn main() {
    for (label, problem) in [
        ("hydrogen (d=16)", hydrogen_hamiltonian()),
        (
            "spin star (d=32)",
            deformed_spin_star(4, 1.0, 1.0, 15.0).unwrap(),
        ),
    ] {
        let n = problem.n_qubits();
        let driver = transverse_field_driver(n).unwrap().to_dense().unwrap();
        let dense = problem.to_dense().unwrap();
        let schedule = AnnealSchedule::new(driver.clone(), dense, 10.0).unwrap();
        let rho0 = ground_state_density(&driver).unwrap();
        let n_steps = 2000;
        let config = AnnealConfig::new(10.0, n_steps, 1e-4).unwrap();
        // warm up
        evolve(&rho0, &schedule, &config, 0).unwrap();
        let reps = 5;
        let t0 = Instant::now();
        for _ in 0..reps {
            evolve(&rho0, &schedule, &config, 0).unwrap();
        }
        let dt = t0.elapsed().as_secs_f64() / reps as f64;
        let d = 1usize << n;
        let flops = n_steps as f64 * 4.0 * (d * d * d) as f64 * 8.0;
        println!(
            "{label}: {dt:.4} s per {n_steps}-step evolution  (~{:.1} Gflop/s)",
            flops / dt / 1e9
        );
    }

    // one full gradient step (2L+1 evaluations) for the spin star
    let problem = deformed_spin_star(4, 1.0, 1.0, 15.0).unwrap();
    let config = AnnealConfig::new(10.0, 800, 1e-4).unwrap();
    let evaluator = EnergyEvaluator::new(&problem, &config).unwrap();
    let thetas = TwistAngles::zeros(5);
    let t0 = Instant::now();
    evaluator.gradient(&thetas, 1e-3).unwrap();
    evaluator.energy(&thetas).unwrap();
    println!(
        "spin star descent step (11 evaluations, ns=800): {:.3} s",
        t0.elapsed().as_secs_f64()
    );
}
