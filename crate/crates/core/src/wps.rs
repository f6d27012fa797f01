//! Weighted projective points over F_q(T).
//!
//! A point of P(w_0, ..., w_n) is an orbit of coordinate tuples under the
//! weighted action λ ∗ (x_0, ..., x_n) = (λ^{w_0} x_0, ..., λ^{w_n} x_n) of
//! F_q(T)^×.  Every point has a distinguished integral model:
//!
//! 1. *integral*: clear denominators with a polynomial λ of minimal degree;
//! 2. *content-free*: no prime p has v_p(x_i) ≥ w_i for every coordinate,
//!    so no polynomial λ can be pulled out;
//! 3. *canonical*: among the finitely many content-free models related by a
//!    scalar in F_q^×, take the minimum in the canonical coordinate order.
//!
//! The height of a point is computed two ways that must agree: a sum of
//! local contributions over all places, and a closed form
//! max_i ceil(deg(x_i)/w_i) on the content-free model.  Keeping both alive
//! (and tested against each other) guards the normalization code.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gfq::Field;
use crate::polyfq::{
    enumerate_polys, factor, multiplicity, Poly, Prime, RationalFunction, Valuation,
};

/// Default ceiling on enumeration work, as log2 of the number of candidate
/// coordinate tuples.
pub const DEFAULT_MAX_WORK_LOG2: f64 = 34.0;

/// Hard ceiling that even an explicit override cannot exceed.
pub const HARD_MAX_WORK_LOG2: f64 = 36.0;

/// A weight vector (w_0, ..., w_n) of positive integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightVector {
    weights: Vec<u64>,
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

impl WeightVector {
    pub fn new(weights: Vec<u64>) -> Result<WeightVector> {
        if weights.is_empty() {
            return Err(Error::invalid("weight vector must be nonempty"));
        }
        if weights.contains(&0) {
            return Err(Error::invalid("weights must be positive"));
        }
        Ok(WeightVector { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Number of coordinates, n + 1.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// |w| = w_0 + ... + w_n, the degree-growth exponent of the census.
    pub fn total(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn min(&self) -> u64 {
        *self.weights.iter().min().unwrap()
    }

    /// gcd(q - 1, w_0, ..., w_n): the number of unit scalars acting
    /// trivially on every orbit.
    pub fn unit_gcd(&self, q: u64) -> u64 {
        self.weights.iter().fold(q - 1, |acc, &w| gcd_u64(acc, w))
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

fn floor_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// A weighted projective point in its canonical content-free integral model.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct WppPoint {
    coords: Vec<Poly>,
    weights: Vec<u64>,
    height: i64,
}

impl fmt::Display for WppPoint {
    /// Text form: `[x_0:...:x_n] @ w=(w_0,...,w_n) over gf(q)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "] @ w=(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ") over {}", self.field())
    }
}

impl WppPoint {
    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    pub fn weights(&self) -> WeightVector {
        WeightVector {
            weights: self.weights.clone(),
        }
    }

    pub fn field(&self) -> &Field {
        self.coords[0].field()
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    /// Recompute the height as a sum over places; must equal
    /// [`WppPoint::height`], which caches the closed form.
    pub fn height_via_places(&self) -> i64 {
        let w = WeightVector {
            weights: self.weights.clone(),
        };
        height_place_sum(&self.coords, &w)
    }
}

/// max_i ceil(deg(x_i)/w_i) over the nonzero coordinates: the height of a
/// content-free integral tuple.  Panics on the zero tuple.
pub fn height_closed_form(coords: &[Poly], w: &WeightVector) -> i64 {
    coords
        .iter()
        .zip(w.weights())
        .filter_map(|(x, &wi)| {
            x.degree()
                .finite()
                .map(|d| ceil_div(d, wi as i64))
        })
        .max()
        .expect("zero tuple has no height")
}

/// Height as -Σ_v deg(v) · min_i floor(v(x_i)/w_i), summed over all places
/// of F_q(T).  Defined for any nonzero tuple of integral coordinates and
/// invariant under the weighted scalar action.
pub fn height_place_sum(coords: &[Poly], w: &WeightVector) -> i64 {
    assert_eq!(coords.len(), w.len());
    let mut primes: BTreeMap<Prime, ()> = BTreeMap::new();
    for x in coords {
        if !x.is_zero() && !x.is_constant() {
            for (p, _) in factor(x).expect("nonzero polynomial") {
                primes.insert(p, ());
            }
        }
    }
    let mut total: i64 = 0;
    for p in primes.keys() {
        let m = coords
            .iter()
            .zip(w.weights())
            .filter_map(|(x, &wi)| {
                multiplicity(x, p).finite().map(|v| floor_div(v, wi as i64))
            })
            .min()
            .expect("zero tuple has no height");
        total += p.degree() as i64 * m;
    }
    // Place at infinity: v_∞ = -deg on polynomials, deg(∞) = 1.
    let inf = coords
        .iter()
        .zip(w.weights())
        .filter_map(|(x, &wi)| x.degree().finite().map(|d| floor_div(-d, wi as i64)))
        .min()
        .expect("zero tuple has no height");
    -(total + inf)
}

/// Whether no prime can be factored out of the tuple: there is no p with
/// v_p(x_i) ≥ w_i for every coordinate (zero coordinates impose nothing).
pub fn content_free(coords: &[Poly], w: &WeightVector) -> Result<bool> {
    check_tuple(coords, w)?;
    let mut g = Poly::zero(coords[0].field());
    for x in coords {
        g = g.gcd(x);
    }
    if g.is_constant() {
        return Ok(true);
    }
    for (p, _) in factor(&g)? {
        let deep = coords.iter().zip(w.weights()).all(|(x, &wi)| {
            match multiplicity(x, &p) {
                Valuation::PosInfinity => true,
                Valuation::Finite(v) => v >= wi as i64,
            }
        });
        if deep {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_tuple(coords: &[Poly], w: &WeightVector) -> Result<()> {
    if coords.len() != w.len() {
        return Err(Error::invalid(format!(
            "{} coordinates for weight vector of length {}",
            coords.len(),
            w.len()
        )));
    }
    if coords.iter().all(Poly::is_zero) {
        return Err(Error::AllZero);
    }
    let field = coords[0].field();
    if coords.iter().any(|x| x.field() != field) {
        return Err(Error::invalid("coordinates from different fields"));
    }
    Ok(())
}

/// Minimum of the F_q^×-orbit of a content-free tuple under the weighted
/// action, in the canonical coordinate order.
pub fn canonicalize(coords: &[Poly], w: &WeightVector) -> Result<Vec<Poly>> {
    check_tuple(coords, w)?;
    let field = coords[0].field().clone();
    let q = field.q();
    let mut best: Option<Vec<Poly>> = None;
    for lambda in field.nonzero_elements() {
        let cand: Vec<Poly> = coords
            .iter()
            .zip(w.weights())
            .map(|(x, &wi)| {
                // λ^{w} = λ^{w mod (q-1)} since λ^{q-1} = 1.
                x.mul_elem(&field.pow(&lambda, wi % (q - 1)))
            })
            .collect();
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    Ok(best.unwrap())
}

/// Normalize a tuple of rational-function coordinates to the canonical
/// content-free integral model and compute its height.
pub fn normalize(coords: &[RationalFunction], w: &WeightVector) -> Result<WppPoint> {
    if coords.len() != w.len() {
        return Err(Error::invalid(format!(
            "{} coordinates for weight vector of length {}",
            coords.len(),
            w.len()
        )));
    }
    if coords.iter().all(RationalFunction::is_zero) {
        return Err(Error::AllZero);
    }
    let field = coords[0].field().clone();
    if coords.iter().any(|x| x.field() != &field) {
        return Err(Error::invalid("coordinates from different fields"));
    }

    // Step 1: clear denominators with λ = Π p^{k_p}, where k_p is the least
    // power making every λ^{w_i} x_i integral at p.
    let mut scale: BTreeMap<Prime, i64> = BTreeMap::new();
    for (x, &wi) in coords.iter().zip(w.weights()) {
        if x.is_zero() {
            continue;
        }
        for (p, m) in factor(x.den())? {
            let k = ceil_div(m as i64, wi as i64);
            let slot = scale.entry(p).or_insert(0);
            *slot = (*slot).max(k);
        }
    }
    let mut lambda = Poly::one(&field);
    for (p, k) in &scale {
        lambda = lambda.mul(&p.poly().pow(*k as u64));
    }
    let mut integral: Vec<Poly> = Vec::with_capacity(coords.len());
    for (x, &wi) in coords.iter().zip(w.weights()) {
        let scaled = x.mul_poly(&lambda.pow(wi));
        let poly = scaled
            .as_poly()
            .expect("denominators cleared by construction")
            .clone();
        integral.push(poly);
    }

    // Step 2: remove content.  A single pass over the primes of the gcd
    // suffices because dividing by one prime does not change multiplicities
    // at another.
    let mut g = Poly::zero(&field);
    for x in &integral {
        g = g.gcd(x);
    }
    if !g.is_constant() {
        for (p, _) in factor(&g)? {
            let depth = integral
                .iter()
                .zip(w.weights())
                .filter_map(|(x, &wi)| {
                    multiplicity(x, &p).finite().map(|v| floor_div(v, wi as i64))
                })
                .min()
                .expect("nonzero tuple");
            if depth >= 1 {
                for (x, &wi) in integral.iter_mut().zip(w.weights()) {
                    if !x.is_zero() {
                        *x = x.div_exact(&p.poly().pow(depth as u64 * wi));
                    }
                }
            }
        }
    }
    debug_assert!(content_free(&integral, w)?);

    // Step 3: canonical orbit representative.
    let coords = canonicalize(&integral, w)?;
    let height = height_closed_form(&coords, w);
    Ok(WppPoint {
        coords,
        weights: w.weights().to_vec(),
        height,
    })
}

/// Wrap an already-integral tuple as a point.
pub fn point_from_polys(coords: &[Poly], w: &WeightVector) -> Result<WppPoint> {
    let rational: Vec<RationalFunction> = coords
        .iter()
        .map(|x| RationalFunction::from_poly(x.clone()))
        .collect();
    normalize(&rational, w)
}

/// log2 of the number of coordinate tuples scanned when enumerating
/// P(w)(F_q(T)) at height b.
pub fn enumeration_work_log2(field: &Field, w: &WeightVector, b: u32) -> f64 {
    let logq = (field.q() as f64).log2();
    w.weights()
        .iter()
        .map(|&wi| (b as u64 * wi + 1) as f64 * logq)
        .sum()
}

/// Enforce the enumeration work bound (capped at [`HARD_MAX_WORK_LOG2`]).
pub fn check_work(field: &Field, w: &WeightVector, b: u32, max_work_log2: f64) -> Result<f64> {
    let bound = max_work_log2.min(HARD_MAX_WORK_LOG2);
    let needed = enumeration_work_log2(field, w, b);
    if needed > bound {
        return Err(Error::WorkLimit { needed, bound });
    }
    Ok(needed)
}

/// Candidate first coordinates for a height-b enumeration, in canonical
/// order.  Splitting on the first coordinate gives deterministic,
/// order-preserving work partitions for parallel runs.
pub fn outer_polys(field: &Field, w: &WeightVector, b: u32) -> Result<Vec<Poly>> {
    let d0 = (b as u64 * w.weights()[0]) as i64;
    Ok(enumerate_polys(field, d0)?.collect())
}

/// All points of height exactly b whose canonical model starts with `x0`.
pub fn enumerate_with_outer(
    field: &Field,
    w: &WeightVector,
    b: u32,
    x0: &Poly,
) -> Result<Vec<WppPoint>> {
    let mut out = Vec::new();
    let mut coords = vec![x0.clone()];
    rec_enumerate(field, w, b, &mut coords, &mut out)?;
    Ok(out)
}

fn rec_enumerate(
    field: &Field,
    w: &WeightVector,
    b: u32,
    coords: &mut Vec<Poly>,
    out: &mut Vec<WppPoint>,
) -> Result<()> {
    if coords.len() == w.len() {
        if coords.iter().all(Poly::is_zero) {
            return Ok(());
        }
        if height_closed_form(coords, w) != b as i64 {
            return Ok(());
        }
        if !content_free(coords, w)? {
            return Ok(());
        }
        let canon = canonicalize(coords, w)?;
        if &canon != coords {
            return Ok(());
        }
        out.push(WppPoint {
            coords: coords.clone(),
            weights: w.weights().to_vec(),
            height: b as i64,
        });
        return Ok(());
    }
    let d = (b as u64 * w.weights()[coords.len()]) as i64;
    for x in enumerate_polys(field, d)? {
        coords.push(x);
        rec_enumerate(field, w, b, coords, out)?;
        coords.pop();
    }
    Ok(())
}

/// Exhaustively enumerate P(w)(F_q(T)) at height exactly b, one canonical
/// model per point, in canonical order.
pub fn enumerate_points(
    field: &Field,
    w: &WeightVector,
    b: u32,
    max_work_log2: f64,
) -> Result<Vec<WppPoint>> {
    check_work(field, w, b, max_work_log2)?;
    let mut out = Vec::new();
    for x0 in outer_polys(field, w, b)? {
        out.extend(enumerate_with_outer(field, w, b, &x0)?);
    }
    Ok(out)
}

/// Count content-free tuples of height exactly b *before* identifying
/// scalar orbits.  Used to cross-check lattice-shell counts.
pub fn content_free_tuple_count(
    field: &Field,
    w: &WeightVector,
    b: u32,
    max_work_log2: f64,
) -> Result<u64> {
    check_work(field, w, b, max_work_log2)?;
    let mut count = 0u64;
    let mut coords: Vec<Poly> = Vec::new();
    rec_count_content_free(field, w, b, &mut coords, &mut count)?;
    Ok(count)
}

fn rec_count_content_free(
    field: &Field,
    w: &WeightVector,
    b: u32,
    coords: &mut Vec<Poly>,
    count: &mut u64,
) -> Result<()> {
    if coords.len() == w.len() {
        if coords.iter().all(Poly::is_zero) {
            return Ok(());
        }
        if height_closed_form(coords, w) == b as i64 && content_free(coords, w)? {
            *count += 1;
        }
        return Ok(());
    }
    let d = (b as u64 * w.weights()[coords.len()]) as i64;
    for x in enumerate_polys(field, d)? {
        coords.push(x);
        rec_count_content_free(field, w, b, coords, count)?;
        coords.pop();
    }
    Ok(())
}
