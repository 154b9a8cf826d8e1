use crate::funcspec::Polynomial;

/// Real roots of `p` in `[lo, hi]`, ascending.
///
/// Recursive isolation: the roots of `p'` split the interval into pieces on
/// which `p` is monotone, and each sign change is bisected to full
/// precision. Roots of even multiplicity are found as critical points.
pub fn real_roots(p: &Polynomial, lo: f64, hi: f64) -> Vec<f64> {
    let c = p.coeffs();
    match p.degree() {
        0 => Vec::new(),
        1 => {
            let r = -c[0] / c[1];
            if (lo..=hi).contains(&r) {
                vec![r]
            } else {
                Vec::new()
            }
        }
        _ => {
            let mut pts = vec![lo];
            pts.extend(real_roots(&p.derivative(), lo, hi));
            pts.push(hi);
            let mut roots: Vec<f64> = Vec::new();
            let push = |r: f64, roots: &mut Vec<f64>| {
                if roots.last().is_none_or(|&l| r > l) {
                    roots.push(r);
                }
            };
            for w in pts.windows(2) {
                let (a, b) = (w[0], w[1]);
                let (fa, fb) = (p.eval_real(a), p.eval_real(b));
                if fa == 0.0 {
                    push(a, &mut roots);
                } else if fa.signum() != fb.signum() && fb != 0.0 {
                    push(bisect(p, a, b, fa), &mut roots);
                }
            }
            if p.eval_real(hi) == 0.0 {
                push(hi, &mut roots);
            }
            roots
        }
    }
}

fn bisect(p: &Polynomial, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let sa = fa.signum();
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval_real(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Cauchy bound: every root of `p` has modulus at most this.
pub(crate) fn cauchy_bound(p: &Polynomial) -> f64 {
    let c = p.coeffs();
    let lead = p.leading();
    1.0 + c[..c.len() - 1].iter().fold(0.0_f64, |m, a| m.max((a / lead).abs()))
}

/// Minimum of `p` over `[0, inf)` and where it is attained, or `None` when
/// `p` is unbounded below there.
pub fn min_on_halfline(p: &Polynomial) -> Option<(f64, f64)> {
    if p.degree() > 0 && p.leading() < 0.0 {
        return None;
    }
    let mut best = (0.0, p.eval_real(0.0));
    if p.degree() >= 2 {
        let dp = p.derivative();
        for x in real_roots(&dp, 0.0, cauchy_bound(&dp)) {
            let v = p.eval_real(x);
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    Some(best)
}
