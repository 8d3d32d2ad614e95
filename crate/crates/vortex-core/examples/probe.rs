use vortex_core::catalog::EquationSpec;
use vortex_core::solver::*;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let points: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1500);
    let which = args.get(2).map(|s| s.as_str()).unwrap_or("cs");
    let (eq, k0, radius) = match which {
        "taubes" => (EquationSpec::new(vec![-1.0, -1.0, 0.0]), -1.0, 0.999),
        _ => (EquationSpec::new(vec![0.0, 1.0, -1.0]), 0.0, 10.0),
    };
    let prob = RadialProblem::new(eq, 1, k0, radius, BoundaryCondition::VacuumDecay);
    let sol = solve_radial(&prob, points, 1e-10).unwrap();
    println!(
        "points={points} which={which} converged={} iters={} res={:.3e} hist_head={:?}",
        sol.report.converged,
        sol.report.iterations,
        sol.report.residual_sup,
        &sol.report.residual_history[..sol.report.residual_history.len().min(8)]
    );
}
