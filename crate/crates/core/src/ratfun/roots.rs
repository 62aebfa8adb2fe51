//! Roots of exact polynomials.
//!
//! Pipeline: strip the root 0 exactly, split the rest into square-free parts
//! (Yun), pull out rational roots of each part exactly, and find whatever is
//! left with Aberth-Ehrlich simultaneous iteration in double precision.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Polynomial, Scalar};
use crate::error::{Error, Result};

/// Residual tolerance used by the spectrum routines.
pub const CONVERGENCE_TOL: f64 = 1e-12;

const MAX_ITERATIONS: usize = 2000;
// Past this magnitude, enumerating divisors for the rational-root test is not
// worth it; such roots go through the numeric path instead.
const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000_000_000;
const MAX_CANDIDATES: usize = 50_000;

/// A root together with its multiplicity. `exact` is set when the root was
/// identified as a rational number.
#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
    pub exact: Option<Scalar>,
}

/// All `deg(p)` roots of `p`, grouped by multiplicity.
///
/// Every numerically found root satisfies `|p(z)| <= tol * sum |c_k| |z|^k`
/// for its square-free factor, otherwise `RootFindingFailed` is returned.
pub fn poly_roots(p: &Polynomial, tol: f64) -> Result<Vec<Root>> {
    if p.is_zero() {
        return Err(Error::RootFindingFailed {
            residuals: Vec::new(),
            worst: f64::INFINITY,
        });
    }
    let mut roots = Vec::new();
    let zeros = p.trailing_zeros();
    if zeros > 0 {
        roots.push(Root {
            value: Complex64::new(0.0, 0.0),
            multiplicity: zeros,
            exact: Some(Scalar::zero()),
        });
    }
    let rest = p.shift_down(zeros);
    for (factor, multiplicity) in square_free_decomposition(&rest) {
        let (rational, remainder) = split_rational_roots(&factor);
        for r in rational {
            roots.push(Root {
                value: Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0),
                multiplicity,
                exact: Some(r),
            });
        }
        if remainder.degree().unwrap_or(0) > 0 {
            for z in aberth(&remainder, tol)? {
                roots.push(Root {
                    value: z,
                    multiplicity,
                    exact: None,
                });
            }
        }
    }
    Ok(roots)
}

/// Yun's algorithm: `p = c * prod a_i^i` with each `a_i` monic, square-free
/// and pairwise coprime. Constant factors are omitted.
pub fn square_free_decomposition(p: &Polynomial) -> Vec<(Polynomial, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = Polynomial::gcd(&f, &df);
    let mut b = f.exact_div(&a0);
    let mut c = df.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = Polynomial::gcd(&b, &d);
        b = b.exact_div(&a);
        c = d.exact_div(&a);
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Rational roots of a square-free polynomial, and the cofactor left after
/// dividing them out.
fn split_rational_roots(p: &Polynomial) -> (Vec<Scalar>, Polynomial) {
    let mut found = Vec::new();
    let mut rest = p.clone();
    if rest.degree() == Some(1) {
        let r = -(rest.coeff(0) / rest.coeff(1));
        return (vec![r], Polynomial::one());
    }
    let ints = rest.primitive_integer();
    let (Some(a0), Some(an)) = (ints.first(), ints.last()) else {
        return (found, rest);
    };
    let (Some(numerators), Some(denominators)) = (divisors(a0), divisors(an)) else {
        return (found, rest);
    };
    if numerators.len() * denominators.len() * 2 > MAX_CANDIDATES {
        return (found, rest);
    }
    for q in &denominators {
        for p_abs in &numerators {
            if !p_abs.gcd(q).is_one() {
                continue;
            }
            for p_signed in [p_abs.clone(), -p_abs.clone()] {
                if rest.degree().unwrap_or(0) == 0 {
                    return (found, rest);
                }
                let ints = rest.primitive_integer();
                if vanishes_at(&ints, &p_signed, q) {
                    let r = Scalar::new(p_signed, q.clone());
                    rest = rest.exact_div(&Polynomial::linear_factor(&r));
                    found.push(r);
                }
            }
        }
    }
    (found, rest)
}

/// `q^d * f(p/q) == 0` evaluated in integers.
fn vanishes_at(coeffs: &[BigInt], p: &BigInt, q: &BigInt) -> bool {
    let d = coeffs.len() - 1;
    let mut q_pow = vec![BigInt::one(); d + 1];
    for k in 1..=d {
        q_pow[k] = &q_pow[k - 1] * q;
    }
    let mut acc = coeffs[d].clone();
    for k in (0..d).rev() {
        acc = acc * p + &coeffs[k] * &q_pow[d - k];
    }
    acc.is_zero()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_SEARCH_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            small.push(BigInt::from(k));
            if k * k != n {
                large.push(BigInt::from(n / k));
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Aberth-Ehrlich iteration for a square-free polynomial of degree >= 1.
fn aberth(p: &Polynomial, tol: f64) -> Result<Vec<Complex64>> {
    let lead = p.leading().expect("nonzero").clone();
    let coeffs: Vec<f64> = p.scale(&lead.recip()).to_f64_coeffs();
    let n = coeffs.len() - 1;
    let dcoeffs: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();
    let eval = |cs: &[f64], z: Complex64| {
        cs.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    };
    let scale_at = |z: Complex64| {
        let r = z.norm();
        coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
    };

    if n == 1 {
        return Ok(vec![Complex64::new(-coeffs[0], 0.0)]);
    }

    // Start on a circle whose radius is the geometric mean of the root moduli.
    let radius = coeffs[0].abs().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let pz = eval(&coeffs, z[k]);
            if pz.norm() == 0.0 {
                continue;
            }
            let ratio = pz / eval(&dcoeffs, z[k]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }

    // Newton polish on the individual roots.
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let d = eval(&dcoeffs, *zk);
            if d.norm() == 0.0 {
                break;
            }
            let step = eval(&coeffs, *zk) / d;
            if step.is_finite() {
                *zk -= step;
            }
        }
    }

    let residuals: Vec<f64> = z
        .iter()
        .map(|&zk| eval(&coeffs, zk).norm() / scale_at(zk).max(f64::MIN_POSITIVE))
        .collect();
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    if worst.is_nan() || worst > tol || (!converged && worst > tol * 1e-2) {
        return Err(Error::RootFindingFailed { residuals, worst });
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn expanded(roots: &[Root]) -> Vec<Complex64> {
        roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    fn contains(values: &[Complex64], target: Complex64) -> bool {
        values.iter().any(|v| (v - target).norm() < 1e-10)
    }

    #[test]
    fn difference_of_squares() {
        let r = expanded(&poly_roots(&p(&[-1, 0, 1]), CONVERGENCE_TOL).unwrap());
        assert_eq!(r.len(), 2);
        assert!(contains(&r, Complex64::new(1.0, 0.0)));
        assert!(contains(&r, Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn repeated_zero_root() {
        // l^3 - 2 l^2
        let roots = poly_roots(&p(&[0, 0, -2, 1]), CONVERGENCE_TOL).unwrap();
        assert_eq!(roots[0].multiplicity, 2);
        assert_eq!(roots[0].exact, Some(Scalar::zero()));
        let r = expanded(&roots);
        assert_eq!(r.len(), 3);
        assert!(contains(&r, Complex64::new(2.0, 0.0)));
    }

    #[test]
    fn quartic_with_complex_pair() {
        // Oracle: (l-2)(l+1)(l^2+1) expanded by repeated multiplication.
        let oracle = &(&p(&[-2, 1]) * &p(&[1, 1])) * &p(&[1, 0, 1]);
        assert_eq!(oracle, p(&[-2, -1, -1, -1, 1]));
        let r = expanded(&poly_roots(&oracle, CONVERGENCE_TOL).unwrap());
        assert_eq!(r.len(), 4);
        for target in [
            Complex64::new(2.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
        ] {
            assert!(contains(&r, target), "missing {target}");
        }
    }

    #[test]
    fn multiplicities_from_square_free_split() {
        // (l-1)^3 (l^2+1)^2
        let f =
            &(&(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[-1, 1])) * &(&p(&[1, 0, 1]) * &p(&[1, 0, 1]));
        let parts = square_free_decomposition(&f);
        assert_eq!(parts, vec![(p(&[1, 0, 1]), 2), (p(&[-1, 1]), 3)]);
        let roots = poly_roots(&f, CONVERGENCE_TOL).unwrap();
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total, 7);
    }

    #[test]
    fn irrational_roots_go_through_iteration() {
        // l^3 - 2: one real cube root, two complex
        let roots = poly_roots(&p(&[-2, 0, 0, 1]), CONVERGENCE_TOL).unwrap();
        assert!(roots.iter().all(|r| r.exact.is_none()));
        let r = expanded(&roots);
        let c = 2f64.cbrt();
        assert!(contains(&r, Complex64::new(c, 0.0)));
        assert!(contains(
            &r,
            Complex64::from_polar(c, 2.0 * std::f64::consts::PI / 3.0)
        ));
    }

    #[test]
    fn remultiplied_roots_match_coefficients() {
        let f = p(&[3, -7, 0, 5, 2, -1, 1]);
        let roots = expanded(&poly_roots(&f, CONVERGENCE_TOL).unwrap());
        let mut prod = vec![Complex64::new(1.0, 0.0)];
        for z in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
            for (k, c) in prod.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * z;
            }
            prod = next;
        }
        let monic = f.monic().to_f64_coeffs();
        for (a, b) in prod.iter().zip(monic) {
            assert!((a - Complex64::new(b, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn zero_polynomial_is_refused() {
        assert!(poly_roots(&Polynomial::zero(), CONVERGENCE_TOL).is_err());
    }
}
