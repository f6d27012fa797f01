//! Rank-r Drinfeld F_q[T]-modules over F_q(T) and their reduction types.
//!
//! A rank-r module is determined by φ_T = T + g_1 τ + ... + g_r τ^r with
//! g_i ∈ F_q(T) and g_r ≠ 0.  Two modules are isomorphic exactly when their
//! coefficient tuples lie in one orbit of the weighted scalar action with
//! weights w_i = q^i - 1, so the isomorphism classes are the points of the
//! weighted projective space P(q-1, q^2-1, ..., q^r-1) over F_q(T) and all
//! of the [`crate::wps`] machinery applies verbatim.
//!
//! At a finite prime p, classify the canonical content-free model by
//! s = max { i : g_i ≢ 0 mod p } (with g_0 = T never reduced): the module
//! has *stable reduction of rank s* when the maximum exists and is
//! *unstable* otherwise.  Good reduction is stable rank r, bad is stable
//! rank < r.

use std::fmt;

use num::{BigInt, BigRational, One};

use crate::error::{Error, Result};
use crate::gfq::Field;
use crate::polyfq::{factor, multiplicity, Poly, Prime, RationalFunction, Valuation};
use crate::wps::{self, WeightVector, WppPoint};

/// Weight vector (q - 1, q^2 - 1, ..., q^r - 1) of the rank-r moduli space.
pub fn drinfeld_weights(q: u64, r: u32) -> Result<WeightVector> {
    if r == 0 {
        return Err(Error::invalid("rank must be at least 1"));
    }
    let mut weights = Vec::with_capacity(r as usize);
    let mut power: u64 = 1;
    for _ in 0..r {
        power = power
            .checked_mul(q)
            .ok_or_else(|| Error::invalid(format!("q^{r} overflows u64")))?;
        weights.push(power - 1);
    }
    WeightVector::new(weights)
}

/// A rank-r Drinfeld module in its canonical content-free model.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct DrinfeldModule {
    point: WppPoint,
}

impl fmt::Display for DrinfeldModule {
    /// Text form: `phi_T = T + g_1*tau + ... + g_r*tau^r over gf(q)`, with
    /// multi-term coefficients parenthesized and zero coefficients omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "phi_T = T")?;
        for (i, g) in self.point.coords().iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let tau = if i == 0 {
                "tau".to_string()
            } else {
                format!("tau^{}", i + 1)
            };
            let one = g.field().is_one(&g.coeff(0)) && g.is_constant();
            if one {
                write!(f, " + {tau}")?;
            } else if g.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 {
                write!(f, " + {g}*{tau}")?;
            } else {
                write!(f, " + ({g})*{tau}")?;
            }
        }
        write!(f, " over {}", self.field())
    }
}

impl DrinfeldModule {
    /// Normalize coefficient functions (g_1, ..., g_r) into a module;
    /// requires g_r ≠ 0.
    pub fn new(field: &Field, coeffs: &[RationalFunction]) -> Result<DrinfeldModule> {
        if coeffs.is_empty() {
            return Err(Error::invalid("rank must be at least 1"));
        }
        if coeffs.last().unwrap().is_zero() {
            return Err(Error::invalid(
                "leading coefficient g_r of a rank-r module must be nonzero",
            ));
        }
        let w = drinfeld_weights(field.q(), coeffs.len() as u32)?;
        let point = wps::normalize(coeffs, &w)?;
        Ok(DrinfeldModule { point })
    }

    /// Wrap an integral tuple (g_1, ..., g_r).
    pub fn from_polys(field: &Field, coeffs: &[Poly]) -> Result<DrinfeldModule> {
        let rational: Vec<RationalFunction> = coeffs
            .iter()
            .map(|g| RationalFunction::from_poly(g.clone()))
            .collect();
        DrinfeldModule::new(field, &rational)
    }

    /// Wrap a point already in canonical form (the enumeration invariant).
    pub(crate) fn from_point(point: WppPoint) -> DrinfeldModule {
        debug_assert!(!point.coords().last().unwrap().is_zero());
        DrinfeldModule { point }
    }

    /// Canonical integral coefficients (g_1, ..., g_r).
    pub fn coeffs(&self) -> &[Poly] {
        self.point.coords()
    }

    pub fn rank(&self) -> u32 {
        self.point.coords().len() as u32
    }

    pub fn field(&self) -> &Field {
        self.point.field()
    }

    pub fn height(&self) -> i64 {
        self.point.height()
    }

    pub fn point(&self) -> &WppPoint {
        &self.point
    }
}

/// Reduction type of a module at a finite prime.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReductionType {
    /// Stable reduction of rank s, 1 ≤ s ≤ r; s = r is good reduction.
    Stable(u32),
    /// All coefficients of the content-free model vanish mod p.
    Unstable,
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionType::Stable(s) => write!(f, "stable of rank {s}"),
            ReductionType::Unstable => write!(f, "unstable"),
        }
    }
}

/// Reduction type at p, read off the canonical content-free model.
pub fn reduction_type(phi: &DrinfeldModule, p: &Prime) -> ReductionType {
    let s = phi
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .find(|(_, g)| !p.poly().divides(g))
        .map(|(i, _)| i as u32 + 1);
    match s {
        Some(s) => ReductionType::Stable(s),
        None => ReductionType::Unstable,
    }
}

/// A local condition on the reduction type at one prime.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LocalCondition {
    /// Stable of rank r.
    Good,
    /// Not good: stable of rank < r, or unstable.
    Bad,
    /// Stable of some rank.
    Stable,
    Unstable,
    /// Stable of rank exactly s.
    StableRankEq(u32),
    /// Stable of rank at least s.
    StableRankGeq(u32),
}

impl fmt::Display for LocalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalCondition::Good => write!(f, "good"),
            LocalCondition::Bad => write!(f, "bad"),
            LocalCondition::Stable => write!(f, "stable"),
            LocalCondition::Unstable => write!(f, "unstable"),
            LocalCondition::StableRankEq(s) => write!(f, "stable={s}"),
            LocalCondition::StableRankGeq(s) => write!(f, "stable>={s}"),
        }
    }
}

impl LocalCondition {
    /// Check the rank parameter against the ambient rank.
    pub fn validate(&self, r: u32) -> Result<()> {
        match *self {
            LocalCondition::StableRankEq(s) | LocalCondition::StableRankGeq(s) => {
                if s < 1 || s > r {
                    Err(Error::RankOutOfRange { s, r })
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Whether a reduction type satisfies the condition in rank r.
    pub fn matches(&self, t: ReductionType, r: u32) -> Result<bool> {
        self.validate(r)?;
        Ok(match (*self, t) {
            (LocalCondition::Good, ReductionType::Stable(s)) => s == r,
            (LocalCondition::Bad, t) => t != ReductionType::Stable(r),
            (LocalCondition::Stable, t) => matches!(t, ReductionType::Stable(_)),
            (LocalCondition::Unstable, t) => t == ReductionType::Unstable,
            (LocalCondition::StableRankEq(s), ReductionType::Stable(u)) => u == s,
            (LocalCondition::StableRankGeq(s), ReductionType::Stable(u)) => u >= s,
            (_, ReductionType::Unstable) => false,
        })
    }

    /// Local density factor κ from the residue-tuple measure at a prime of
    /// norm N: the proportion of tuples in (F_q[T]/p)^r whose reduction
    /// pattern satisfies the condition.
    pub fn kappa(&self, norm: u64, r: u32) -> Result<BigRational> {
        self.validate(r)?;
        if norm < 2 {
            return Err(Error::invalid("prime norm must be at least 2"));
        }
        let n = BigInt::from(norm);
        let nr = n.pow(r);
        let frac = |num: BigInt, den: BigInt| BigRational::new(num, den);
        Ok(match *self {
            LocalCondition::Good => frac(&n - 1, n.clone()),
            LocalCondition::Bad => frac(BigInt::one(), n.clone()),
            LocalCondition::Stable => frac(&nr - 1, nr.clone()),
            LocalCondition::Unstable => frac(BigInt::one(), nr.clone()),
            LocalCondition::StableRankEq(s) => {
                frac(n.pow(s) - n.pow(s - 1), nr.clone())
            }
            LocalCondition::StableRankGeq(s) => frac(&nr - n.pow(s - 1), nr.clone()),
        })
    }
}

/// Whether φ satisfies the condition at p.
pub fn satisfies(phi: &DrinfeldModule, p: &Prime, c: LocalCondition) -> Result<bool> {
    c.matches(reduction_type(phi, p), phi.rank())
}

/// Whether φ has stable reduction of rank ≥ s at *every* finite prime.
/// Only primes dividing gcd(g_s, ..., g_r) can violate the condition, so
/// the check is finite.
pub fn everywhere_stable_geq(phi: &DrinfeldModule, s: u32) -> Result<bool> {
    everywhere_stable_geq_excluding(phi, s, &[])
}

/// Same, but exempting the listed primes (where separate conditions are
/// imposed instead).
pub fn everywhere_stable_geq_excluding(
    phi: &DrinfeldModule,
    s: u32,
    exclude: &[Prime],
) -> Result<bool> {
    let r = phi.rank();
    if s < 1 || s >= r {
        return Err(Error::RankOutOfRange { s, r });
    }
    let field = phi.field().clone();
    let mut g = Poly::zero(&field);
    for x in &phi.coeffs()[(s - 1) as usize..] {
        g = g.gcd(x);
    }
    // g ≠ 0 because g_r ≠ 0.
    if g.is_constant() {
        return Ok(true);
    }
    for (p, _) in factor(&g)? {
        if exclude.contains(&p) {
            continue;
        }
        if !satisfies(phi, &p, LocalCondition::StableRankGeq(s))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustively enumerate rank-r modules of height exactly b, one canonical
/// model per isomorphism class, in canonical order.
pub fn enumerate_drinfeld(
    field: &Field,
    r: u32,
    b: u32,
    max_work_log2: f64,
) -> Result<Vec<DrinfeldModule>> {
    let w = drinfeld_weights(field.q(), r)?;
    let pts = wps::enumerate_points(field, &w, b, max_work_log2)?;
    Ok(pts
        .into_iter()
        .filter(|pt| !pt.coords().last().unwrap().is_zero())
        .map(DrinfeldModule::from_point)
        .collect())
}

/// The coefficient valuations that [`reduction_type`] reads are those of
/// the canonical model; expose them for diagnostics.
pub fn coefficient_valuations(phi: &DrinfeldModule, p: &Prime) -> Vec<Valuation> {
    phi.coeffs().iter().map(|g| multiplicity(g, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    fn poly(field: &Field, coeffs: &[u64]) -> Poly {
        Poly::from_coeffs(
            field,
            coeffs.iter().map(|&c| field.from_residue(c)).collect(),
        )
    }

    fn prime(field: &Field, coeffs: &[u64]) -> Prime {
        Prime::new(poly(field, coeffs)).unwrap()
    }

    fn rat(r: i64, s: i64) -> BigRational {
        BigRational::new(BigInt::from(r), BigInt::from(s))
    }

    #[test]
    fn weights_are_q_powers_minus_one() {
        assert_eq!(drinfeld_weights(2, 2).unwrap().weights(), &[1, 3]);
        assert_eq!(drinfeld_weights(3, 3).unwrap().weights(), &[2, 8, 26]);
        assert!(drinfeld_weights(2, 0).is_err());
    }

    #[test]
    fn rank_one_height_zero_classes() {
        // Rank 1: modules T + g_1 τ, g_1 ≠ 0, with weight q - 1.  Scalars
        // act through λ^{q-1} = 1, so the action is trivial and the q - 1
        // nonzero constants are pairwise non-isomorphic height-0 classes.
        for q in [2u64, 3, 4, 5] {
            let f = gf(q);
            let mods = enumerate_drinfeld(&f, 1, 0, 34.0).unwrap();
            assert_eq!(mods.len(), q as usize - 1, "q = {q}");
        }
    }

    #[test]
    fn rank_two_counts_over_f2() {
        // Frozen from an independent brute-force enumeration: the number of
        // rank-2 isomorphism classes over F_2(T) of height b = 0..3.
        let f = gf(2);
        let counts: Vec<usize> = (0..4)
            .map(|b| enumerate_drinfeld(&f, 2, b, 34.0).unwrap().len())
            .collect();
        assert_eq!(counts, vec![2, 54, 840, 13440]);
    }

    #[test]
    fn reduction_types_by_hand() {
        let f = gf(2);
        let t = prime(&f, &[0, 1]);
        let t1 = prime(&f, &[1, 1]);
        // φ_T = T + T·τ + (T+1)·τ^2: at T the top nonzero coefficient is
        // g_2, good; at T+1 only g_1 survives, stable rank 1 (bad).
        let phi =
            DrinfeldModule::from_polys(&f, &[poly(&f, &[0, 1]), poly(&f, &[1, 1])]).unwrap();
        assert_eq!(reduction_type(&phi, &t), ReductionType::Stable(2));
        assert_eq!(reduction_type(&phi, &t1), ReductionType::Stable(1));
        assert!(satisfies(&phi, &t, LocalCondition::Good).unwrap());
        assert!(satisfies(&phi, &t1, LocalCondition::Bad).unwrap());
        assert!(satisfies(&phi, &t1, LocalCondition::Stable).unwrap());
        assert!(satisfies(&phi, &t1, LocalCondition::StableRankEq(1)).unwrap());
        assert!(!satisfies(&phi, &t1, LocalCondition::StableRankGeq(2)).unwrap());
        // φ_T = T + T(T+1)·τ + T^3·τ^2 normalizes: content-free under
        // weights (1,3) since v_T(g_2) = 3 but v_T(g_1) = 1 < 1·... both
        // coordinates divisible by T with v ≥ w? v_T(g_1) = 1 ≥ 1 and
        // v_T(g_2) = 3 ≥ 3, so content T is removed: (T+1, 1).
        let psi = DrinfeldModule::from_polys(
            &f,
            &[poly(&f, &[0, 1, 1]), poly(&f, &[0, 0, 0, 1])],
        )
        .unwrap();
        assert_eq!(psi.coeffs()[0], poly(&f, &[1, 1]));
        assert_eq!(psi.coeffs()[1], Poly::one(&f));
        assert_eq!(reduction_type(&psi, &t), ReductionType::Stable(2));
    }

    #[test]
    fn unstable_requires_wide_valuation_gap() {
        let f = gf(2);
        let t = prime(&f, &[0, 1]);
        // (T, T^2) is content-free under (1,3) yet both coefficients vanish
        // mod T: unstable at T.
        let phi =
            DrinfeldModule::from_polys(&f, &[poly(&f, &[0, 1]), poly(&f, &[0, 0, 1])]).unwrap();
        assert_eq!(phi.coeffs()[0], poly(&f, &[0, 1]));
        assert_eq!(reduction_type(&phi, &t), ReductionType::Unstable);
        assert!(satisfies(&phi, &t, LocalCondition::Unstable).unwrap());
        assert!(satisfies(&phi, &t, LocalCondition::Bad).unwrap());
        assert!(!satisfies(&phi, &t, LocalCondition::Stable).unwrap());
    }

    #[test]
    fn everywhere_stable_examples() {
        let f = gf(2);
        // g = (T, T^2+T+1): gcd = 1, stable everywhere.
        let phi = DrinfeldModule::from_polys(
            &f,
            &[poly(&f, &[0, 1]), poly(&f, &[1, 1, 1])],
        )
        .unwrap();
        assert!(everywhere_stable_geq(&phi, 1).unwrap());
        // g = (T, T^2): unstable at T.
        let psi =
            DrinfeldModule::from_polys(&f, &[poly(&f, &[0, 1]), poly(&f, &[0, 0, 1])]).unwrap();
        assert!(!everywhere_stable_geq(&psi, 1).unwrap());
        assert!(matches!(
            everywhere_stable_geq(&phi, 2),
            Err(Error::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn kappa_values_from_residue_measures() {
        // Rank 2, norm N: the six condition measures.
        assert_eq!(LocalCondition::Good.kappa(2, 2).unwrap(), rat(1, 2));
        assert_eq!(LocalCondition::Bad.kappa(2, 2).unwrap(), rat(1, 2));
        assert_eq!(LocalCondition::Stable.kappa(2, 2).unwrap(), rat(3, 4));
        assert_eq!(LocalCondition::Unstable.kappa(2, 2).unwrap(), rat(1, 4));
        assert_eq!(
            LocalCondition::StableRankEq(1).kappa(2, 2).unwrap(),
            rat(1, 4)
        );
        assert_eq!(
            LocalCondition::StableRankGeq(1).kappa(2, 2).unwrap(),
            rat(3, 4)
        );
        // Example from rank 5 at norm 7: stable rank exactly 5 has measure
        // (7^5 - 7^4)/7^5... for rank 5 the "good" shortcut must agree.
        assert_eq!(
            LocalCondition::StableRankEq(5).kappa(7, 5).unwrap(),
            LocalCondition::Good.kappa(7, 5).unwrap()
        );
        // Consistency: measures of a partition sum to 1.
        for (norm, r) in [(2u64, 2u32), (3, 3), (4, 2), (9, 4)] {
            let mut total = LocalCondition::Unstable.kappa(norm, r).unwrap();
            for s in 1..=r {
                total += LocalCondition::StableRankEq(s).kappa(norm, r).unwrap();
            }
            assert!(total.is_one(), "N={norm}, r={r}");
            let good_plus_bad = LocalCondition::Good.kappa(norm, r).unwrap()
                + LocalCondition::Bad.kappa(norm, r).unwrap();
            assert!(good_plus_bad.is_one());
        }
        assert!(LocalCondition::StableRankEq(3).kappa(2, 2).is_err());
        assert!(!rat(0, 1).is_one());
        assert!(rat(0, 1).is_zero());
    }

    #[test]
    fn module_display() {
        let f = gf(2);
        let phi = DrinfeldModule::from_polys(
            &f,
            &[poly(&f, &[0, 1, 1]), poly(&f, &[1])],
        )
        .unwrap();
        assert_eq!(
            phi.to_string(),
            "phi_T = T + (T^2+T)*tau + tau^2 over gf(2)"
        );
        let psi = DrinfeldModule::from_polys(
            &f,
            &[Poly::zero(&f), poly(&f, &[0, 0, 1])],
        )
        .unwrap();
        assert_eq!(psi.to_string(), "phi_T = T + T^2*tau^2 over gf(2)");
    }
}
