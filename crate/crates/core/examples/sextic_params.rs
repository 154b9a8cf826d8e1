//! Grid search for `alpha, gamma > 0` making
//! `f(z) = alpha + beta z - z^3 + z^5 + gamma z^6` nonnegative on the real
//! line and increasing on `[0, inf)`, with `beta = 0.3`.
//!
//! Prints the smallest pair on a 0.05 grid (gamma first) whose sampled
//! minima clear a margin of 0.01, and the minima it achieves.

use nnpres::FunctionSpec;

const BETA: f64 = 0.3;
const POINTS: usize = 100_000;
const RANGE: f64 = 50.0;
/// Required slack in both minima, so the frozen pair is not borderline.
const MARGIN: f64 = 0.01;

fn sextic(alpha: f64, gamma: f64) -> FunctionSpec {
    FunctionSpec::polynomial([alpha, BETA, 0.0, -1.0, 0.0, 1.0, gamma])
}

fn min_over(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    (0..POINTS)
        .map(|i| f(lo + (hi - lo) * i as f64 / (POINTS - 1) as f64))
        .fold(f64::INFINITY, f64::min)
}

// gamma x^6 dominates the other terms for |x| >= RANGE
fn tail_dominates(alpha: f64, gamma: f64) -> bool {
    let x: f64 = RANGE;
    gamma * x.powi(6) > alpha + BETA * x + x.powi(3) + x.powi(5)
}

fn admissible(alpha: f64, gamma: f64) -> Option<(f64, f64)> {
    let f = sextic(alpha, gamma);
    let p = f.as_polynomial().unwrap().clone();
    let dp = p.derivative();
    let fmin = min_over(|x| p.eval_real(x), -RANGE, RANGE);
    let dmin = min_over(|x| dp.eval_real(x), 0.0, RANGE);
    (fmin >= MARGIN && dmin >= MARGIN && tail_dominates(alpha, gamma)).then_some((fmin, dmin))
}

fn main() {
    for gi in 1..=100 {
        let gamma = 0.05 * gi as f64;
        for ai in 1..=100 {
            let alpha = 0.05 * ai as f64;
            if let Some((fmin, dmin)) = admissible(alpha, gamma) {
                println!("beta = {BETA}, alpha = {alpha:.2}, gamma = {gamma:.2}");
                println!("min f on [-{RANGE}, {RANGE}] = {fmin:.6}, min f' on [0, {RANGE}] = {dmin:.6}");
                return;
            }
        }
    }
    println!("no admissible pair on the grid");
}
