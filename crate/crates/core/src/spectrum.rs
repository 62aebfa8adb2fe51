//! Spectra of graphs whose weights may depend on `l`.
//!
//! The spectrum is the set of solutions of `det(M(G) - l I) = 0`. The
//! determinant is computed exactly: each row is cleared of denominators and
//! the resulting polynomial matrix goes through fraction-free (Bareiss)
//! elimination.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::netgraph::WeightedDigraph;
use crate::ratfun::{
    normalize, poly_roots, Polynomial, RationalFunction, CONVERGENCE_TOL, DEGREE_CAP,
};

/// Default resolution when pairing eigenvalues.
pub const DEFAULT_TOL: f64 = 1e-8;

/// `det(M(G) - l I) = num / den` in lowest terms, with both sides monic.
/// The eigenvalues are the roots of `num`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharEquation {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl CharEquation {
    pub fn is_identically_zero(&self) -> bool {
        self.num.is_zero()
    }
}

pub fn char_equation(g: &WeightedDigraph) -> Result<CharEquation> {
    let n = g.len();
    let a = g.adjacency();
    let lambda = RationalFunction::lambda();

    let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
    let mut cleared = Polynomial::one();
    for i in 0..n {
        let entries: Vec<RationalFunction> = (0..n)
            .map(|j| {
                if i == j {
                    a.get(i, j).checked_sub(&lambda)
                } else {
                    Ok(a.get(i, j).clone())
                }
            })
            .collect::<Result<_>>()?;
        let lcm = entries.iter().fold(Polynomial::one(), |acc, e| {
            let g = Polynomial::gcd(&acc, e.den());
            &acc * &e.den().exact_div(&g)
        });
        rows.push(
            entries
                .iter()
                .map(|e| e.num() * &lcm.exact_div(e.den()))
                .collect(),
        );
        cleared = &cleared * &lcm;
        check_degree(&cleared)?;
    }

    let det = bareiss_determinant(rows)?;
    let f = normalize(det, cleared)?;
    Ok(CharEquation {
        num: f.num().monic(),
        den: f.den().clone(),
    })
}

fn check_degree(p: &Polynomial) -> Result<()> {
    match p.degree() {
        Some(d) if d > DEGREE_CAP => Err(Error::DegreeCapExceeded {
            degree: d,
            cap: DEGREE_CAP,
        }),
        _ => Ok(()),
    }
}

/// Determinant over `Q[l]` by fraction-free elimination; every division is
/// exact.
fn bareiss_determinant(mut m: Vec<Vec<Polynomial>>) -> Result<Polynomial> {
    let n = m.len();
    if n == 0 {
        return Ok(Polynomial::one());
    }
    let mut negate = false;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(Polynomial::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.exact_div(&prev);
                check_degree(&m[i][j])?;
            }
            m[i][k] = Polynomial::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// Multiset of eigenvalues with multiplicities, distinct at resolution `tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMultiset {
    entries: Vec<(Complex64, usize)>,
    tol: f64,
}

impl SpectrumMultiset {
    /// Group values that lie within `tol` of each other.
    pub fn from_values<I>(values: I, tol: f64) -> Self
    where
        I: IntoIterator<Item = (Complex64, usize)>,
    {
        let mut entries: Vec<(Complex64, usize)> = Vec::new();
        for (z, m) in values {
            if m == 0 {
                continue;
            }
            let z = clean(z);
            match entries.iter_mut().find(|(e, _)| (e - z).norm() <= tol) {
                Some(entry) => entry.1 += m,
                None => entries.push((z, m)),
            }
        }
        entries.sort_by(|(a, _), (b, _)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        SpectrumMultiset { entries, tol }
    }

    pub fn entries(&self) -> &[(Complex64, usize)] {
        &self.entries
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Each eigenvalue repeated by its multiplicity.
    pub fn values(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .flat_map(|&(z, m)| std::iter::repeat_n(z, m))
            .collect()
    }

    /// Total multiplicity.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity_of(&self, z: Complex64) -> usize {
        self.entries
            .iter()
            .filter(|(e, _)| (e - z).norm() <= self.tol)
            .map(|e| e.1)
            .sum()
    }

    /// Multiset sum with extra values.
    pub fn with_extra(&self, extra: &[Complex64]) -> Self {
        Self::from_values(
            self.entries
                .iter()
                .copied()
                .chain(extra.iter().map(|&z| (z, 1))),
            self.tol,
        )
    }

    /// The same multiset with every eigenvalue within `tol` of zero removed.
    pub fn without_zeros(&self) -> Self {
        SpectrumMultiset {
            entries: self
                .entries
                .iter()
                .filter(|(z, _)| z.norm() > self.tol)
                .copied()
                .collect(),
            tol: self.tol,
        }
    }
}

// Numerically real roots come back with imaginary dust.
fn clean(z: Complex64) -> Complex64 {
    let eps = 1e-12 * (1.0 + z.norm());
    Complex64::new(
        if z.re.abs() <= eps { 0.0 } else { z.re },
        if z.im.abs() <= eps { 0.0 } else { z.im },
    )
}

/// Eigenvalues of `g` with multiplicities, grouped at resolution `tol`.
pub fn spectrum(g: &WeightedDigraph, tol: f64) -> Result<SpectrumMultiset> {
    let ce = char_equation(g)?;
    if ce.is_identically_zero() {
        return Err(Error::IdenticallyZeroDeterminant);
    }
    let roots = poly_roots(&ce.num, CONVERGENCE_TOL)?;
    Ok(SpectrumMultiset::from_values(
        roots.into_iter().map(|r| (r.value, r.multiplicity)),
        tol,
    ))
}

/// Values the spectrum may lose under a reduction: one per removed vertex.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrectionSet {
    pub entries: Vec<Complex64>,
}

impl CorrectionSet {
    /// Convert removed-vertex loop weights into correction values. Constant
    /// weights contribute themselves; a weight `w(l)` depending on `l`
    /// contributes the solutions of `l - w(l) = 0`.
    pub fn from_loop_weights(weights: &[RationalFunction]) -> Result<Self> {
        let mut entries = Vec::new();
        for w in weights {
            match w.as_constant() {
                Some(c) => entries.push(Complex64::new(
                    num_traits::ToPrimitive::to_f64(&c).unwrap_or(f64::NAN),
                    0.0,
                )),
                None => {
                    let shifted = RationalFunction::lambda().checked_sub(w)?;
                    if shifted.is_zero() {
                        return Err(Error::IdenticallyZeroDeterminant);
                    }
                    for r in poly_roots(shifted.num(), CONVERGENCE_TOL)? {
                        entries.extend(std::iter::repeat_n(r.value, r.multiplicity));
                    }
                }
            }
        }
        Ok(CorrectionSet { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Loop weights (zero when absent) of the vertices outside `keep`.
pub fn correction_set<S: AsRef<str>>(g: &WeightedDigraph, keep: &[S]) -> Result<CorrectionSet> {
    let kept = g.subset(keep)?;
    let mut weights = Vec::new();
    for v in (0..g.len()).filter(|v| !kept.contains(v)) {
        let w = g.loop_weight(v);
        if !w.is_constant() {
            return Err(Error::NonConstantLoop(g.label(v).to_string()));
        }
        weights.push(w);
    }
    CorrectionSet::from_loop_weights(&weights)
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatchVerdict {
    Match,
    /// Values left over on either side that no correction entry explains.
    Mismatch {
        unexplained: Vec<Complex64>,
    },
}

impl MatchVerdict {
    pub fn is_match(&self) -> bool {
        matches!(self, MatchVerdict::Match)
    }
}

/// Pair the eigenvalues of `a` and `b` within `tol`; whatever is left over
/// must be absorbed by distinct entries of `corr`. Correction entries may go
/// unused.
pub fn spectra_match(
    a: &SpectrumMultiset,
    b: &SpectrumMultiset,
    corr: &CorrectionSet,
    tol: f64,
) -> MatchVerdict {
    let mut b_left: Vec<Option<Complex64>> = b.values().into_iter().map(Some).collect();
    let mut unpaired = Vec::new();
    for z in a.values() {
        match take_nearest(&mut b_left, z, tol) {
            Some(_) => {}
            None => unpaired.push(z),
        }
    }
    unpaired.extend(b_left.into_iter().flatten());

    let mut corr_left: Vec<Option<Complex64>> = corr.entries.iter().copied().map(Some).collect();
    let unexplained: Vec<Complex64> = unpaired
        .into_iter()
        .filter(|&z| take_nearest(&mut corr_left, z, tol).is_none())
        .collect();
    if unexplained.is_empty() {
        MatchVerdict::Match
    } else {
        MatchVerdict::Mismatch { unexplained }
    }
}

fn take_nearest(pool: &mut [Option<Complex64>], z: Complex64, tol: f64) -> Option<Complex64> {
    let (idx, _) = pool
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, (v - z).norm())))
        .filter(|&(_, d)| d <= tol)
        .min_by(|x, y| x.1.total_cmp(&y.1))?;
    pool[idx].take()
}
