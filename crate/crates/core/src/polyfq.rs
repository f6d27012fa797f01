//! Dense univariate polynomials over F_q, the places of F_q(T), and the
//! valuations attached to them.
//!
//! Everything downstream leans on two canonical orders fixed here:
//!
//! * elements of F_q are ordered by their coefficient tuples, constant term
//!   most significant (see [`crate::gfq`]);
//! * polynomials are ordered by degree, then lexicographically on their
//!   coefficient tuples from the constant term upward.
//!
//! Enumeration (all polynomials up to a degree, monic polynomials of a
//! degree, monic irreducibles of a degree) yields exactly this order, so
//! "the first irreducible" or "the minimum of an orbit" mean the same thing
//! everywhere.
//!
//! Factorization is plain trial division by irreducibles of increasing
//! degree.  At census scale the polynomials being factored are tiny (gcds of
//! bounded-height coordinate tuples), and trial division keeps the whole
//! pipeline exact and dependency-free.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gfq::{Field, FqElem};

/// Enumerating all polynomials of degree ≤ d touches q^{d+1} items; refuse
/// anything above this many bits of work.
pub const ENUM_BOUND_LOG2: f64 = 30.0;

/// Bound for irreducible enumeration (q^d candidate polynomials of degree d).
pub const IRREDUCIBLE_ENUM_BOUND_LOG2: f64 = 26.0;

/// Degree of a polynomial, with the zero polynomial at -∞ so that
/// deg(fg) = deg(f) + deg(g) holds without exceptions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Degree {
    NegInf,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_neg_inf(self) -> bool {
        self == Degree::NegInf
    }
}

impl std::ops::Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

/// A polynomial in F_q[T], stored constant term first with no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FqElem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for Poly {}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    /// Canonical order: by degree, then lexicographically on coefficients
    /// from the constant term upward.  Only meaningful within one field.
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.field, other.field);
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    /// Text form: terms in descending powers, zero terms omitted, unit
    /// coefficients omitted except on the constant term, e.g. `T^2+T+2` or
    /// `[1,2]*T^3+[0,1]` over an extension field.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let unit = self.field.is_one(c);
            match (k, unit) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{c}*T")?,
                (_, true) => write!(f, "T^{k}")?,
                (_, false) => write!(f, "{c}*T^{k}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: FqElem) -> Poly {
        let coeffs = if c.is_zero() { Vec::new() } else { vec![c] };
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// The variable T.
    pub fn variable(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![field.zero(), field.one()],
        }
    }

    pub fn monomial(field: &Field, c: FqElem, k: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero(field);
        }
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Build from coefficients (constant term first), trimming trailing
    /// zeros.
    pub fn from_coeffs(field: &Field, mut coeffs: Vec<FqElem>) -> Poly {
        while coeffs.last().is_some_and(FqElem::is_zero) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coefficients, constant term first, no trailing zeros (empty for 0).
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FqElem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Finite(self.coeffs.len() as i64 - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&FqElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.field.is_one(c))
    }

    fn check_field(&self, other: &Poly) {
        assert_eq!(self.field, other.field, "polynomials from different fields");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| f.add(&self.coeff(k), &other.coeff(k)))
            .collect();
        Poly::from_coeffs(f, coeffs)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut coeffs = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(a, b));
            }
        }
        Poly::from_coeffs(f, coeffs)
    }

    pub fn mul_elem(&self, c: &FqElem) -> Poly {
        let f = &self.field;
        if c.is_zero() {
            return Poly::zero(f);
        }
        Poly {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division: self = q * d + r with deg(r) < deg(d).
    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = d.coeffs.len() - 1;
        let lead_inv = f.inv(d.leading().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quo = if rem.len() > dd {
            vec![f.zero(); rem.len() - dd]
        } else {
            Vec::new()
        };
        while rem.len() > dd {
            let top = rem.last().unwrap().clone();
            if !top.is_zero() {
                let qc = f.mul(&top, &lead_inv);
                let shift = rem.len() - 1 - dd;
                for (i, dc) in d.coeffs.iter().enumerate().take(dd) {
                    let sub = f.mul(&qc, dc);
                    rem[shift + i] = f.sub(&rem[shift + i], &sub);
                }
                quo[shift] = qc;
            }
            rem.pop();
            while rem.last().is_some_and(FqElem::is_zero) {
                rem.pop();
            }
        }
        Ok((Poly::from_coeffs(f, quo), Poly::from_coeffs(f, rem)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divmod(d)?.1)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Exact quotient; panics if the division has a remainder.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divmod(d).expect("division by zero");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic scalar multiple (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("nonzero leading coefficient");
                self.mul_elem(&inv)
            }
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &FqElem) -> FqElem {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

fn log2_steps(q: u64, items_exp: u32) -> f64 {
    items_exp as f64 * (q as f64).log2()
}

/// All polynomials of degree ≤ `d_max` in canonical order (zero first, then
/// by degree, then lexicographically from the constant term).  `d_max < 0`
/// yields only the zero polynomial.
pub fn enumerate_polys(field: &Field, d_max: i64) -> Result<PolyIter> {
    if d_max >= 0 {
        let bits = log2_steps(field.q(), d_max as u32 + 1);
        if bits > ENUM_BOUND_LOG2 {
            return Err(Error::WorkLimit {
                needed: bits,
                bound: ENUM_BOUND_LOG2,
            });
        }
    }
    Ok(PolyIter {
        field: field.clone(),
        d_max,
        state: IterState::Zero,
    })
}

enum IterState {
    Zero,
    Degree { d: i64, idx: u64, count: u64 },
    Done,
}

pub struct PolyIter {
    field: Field,
    d_max: i64,
    state: IterState,
}

impl PolyIter {
    fn degree_count(&self, d: i64) -> u64 {
        // (q - 1) * q^d polynomials of exact degree d.
        (self.field.q() - 1) * self.field.q().pow(d as u32)
    }

    fn decode(&self, d: i64, idx: u64) -> Poly {
        let f = &self.field;
        let q = f.q();
        // Leading coefficient is the least significant digit (range 1..q);
        // lower coefficients follow base q with the constant term most
        // significant, matching the canonical order.
        let lead = idx % (q - 1) + 1;
        let mut rest = idx / (q - 1);
        let mut coeffs = vec![f.zero(); d as usize + 1];
        coeffs[d as usize] = f.element_from_index(lead);
        for i in (0..d as usize).rev() {
            coeffs[i] = f.element_from_index(rest % q);
            rest /= q;
        }
        Poly {
            field: f.clone(),
            coeffs,
        }
    }
}

impl Iterator for PolyIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        loop {
            match self.state {
                IterState::Zero => {
                    self.state = if self.d_max >= 0 {
                        IterState::Degree {
                            d: 0,
                            idx: 0,
                            count: self.degree_count(0),
                        }
                    } else {
                        IterState::Done
                    };
                    return Some(Poly::zero(&self.field));
                }
                IterState::Degree { d, idx, count } => {
                    if idx < count {
                        self.state = IterState::Degree {
                            d,
                            idx: idx + 1,
                            count,
                        };
                        return Some(self.decode(d, idx));
                    }
                    if d < self.d_max {
                        self.state = IterState::Degree {
                            d: d + 1,
                            idx: 0,
                            count: self.degree_count(d + 1),
                        };
                    } else {
                        self.state = IterState::Done;
                        return None;
                    }
                }
                IterState::Done => return None,
            }
        }
    }
}

/// The q^d monic polynomials of exact degree d in canonical order.
pub fn monic_polys_of_degree(field: &Field, d: u32) -> impl Iterator<Item = Poly> + '_ {
    let q = field.q();
    let count = q.pow(d);
    (0..count).map(move |mut idx| {
        let mut coeffs = vec![field.zero(); d as usize + 1];
        coeffs[d as usize] = field.one();
        for i in (0..d as usize).rev() {
            coeffs[i] = field.element_from_index(idx % q);
            idx /= q;
        }
        Poly::from_coeffs(field, coeffs)
    })
}

// ---------------------------------------------------------------------------
// Irreducibility, primes, factorization
// ---------------------------------------------------------------------------

/// Monic irreducibles of each degree 1..=up_to, by sieve-style trial
/// division against the lower-degree lists.
fn irreducible_lists(field: &Field, up_to: u32) -> Vec<Vec<Poly>> {
    let mut lists: Vec<Vec<Poly>> = Vec::new();
    for d in 1..=up_to {
        let mut layer = Vec::new();
        'cand: for cand in monic_polys_of_degree(field, d) {
            for list in lists.iter().take(d as usize / 2) {
                for p in list {
                    if p.divides(&cand) {
                        continue 'cand;
                    }
                }
            }
            layer.push(cand);
        }
        lists.push(layer);
    }
    lists
}

/// A polynomial with no monic irreducible divisor of degree ≤ deg/2 is
/// irreducible (constants and zero are not).
pub fn is_irreducible(f: &Poly) -> bool {
    let d = match f.degree().finite() {
        Some(d) if d >= 1 => d as u32,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let lists = irreducible_lists(f.field(), d / 2);
    lists.iter().flatten().all(|p| !p.divides(f))
}

/// All monic irreducibles of degree exactly d, in canonical order.
pub fn enumerate_monic_irreducibles(field: &Field, d: u32) -> Result<Vec<Prime>> {
    if d == 0 {
        return Err(Error::invalid("irreducibles have degree at least 1"));
    }
    let bits = log2_steps(field.q(), d);
    if bits > IRREDUCIBLE_ENUM_BOUND_LOG2 {
        return Err(Error::WorkLimit {
            needed: bits,
            bound: IRREDUCIBLE_ENUM_BOUND_LOG2,
        });
    }
    let lists = irreducible_lists(field, d);
    Ok(lists
        .into_iter()
        .last()
        .unwrap()
        .into_iter()
        .map(|poly| Prime { poly })
        .collect())
}

fn mobius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of monic irreducibles of degree d over F_q by the necklace
/// formula (1/d) Σ_{e|d} μ(e) q^{d/e}.
pub fn count_irreducibles(field: &Field, d: u32) -> Result<u64> {
    if d == 0 {
        return Err(Error::invalid("irreducibles have degree at least 1"));
    }
    let q = field.q() as i128;
    let mut total: i128 = 0;
    for e in 1..=d as u64 {
        if d as u64 % e != 0 {
            continue;
        }
        let power = d as u64 / e;
        if power as f64 * (field.q() as f64).log2() > 126.0 {
            return Err(Error::invalid("irreducible count overflows"));
        }
        total += mobius(e) as i128 * q.pow(power as u32);
    }
    debug_assert!(total > 0 && total % d as i128 == 0);
    Ok((total / d as i128) as u64)
}

/// A monic irreducible polynomial: a finite place of F_q(T).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Prime {
    poly: Poly,
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

impl Prime {
    pub fn new(poly: Poly) -> Result<Prime> {
        if !poly.is_monic() {
            return Err(Error::NotMonic(poly.to_string()));
        }
        if !is_irreducible(&poly) {
            return Err(Error::NotIrreducible(poly.to_string()));
        }
        let prime = Prime { poly };
        prime.checked_norm()?;
        Ok(prime)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn field(&self) -> &Field {
        self.poly.field()
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree().finite().expect("irreducibles are nonzero") as u32
    }

    fn checked_norm(&self) -> Result<u64> {
        self.field()
            .q()
            .checked_pow(self.degree())
            .ok_or_else(|| Error::invalid(format!("norm of {self} overflows u64")))
    }

    /// Size of the residue field, q^deg.
    pub fn norm(&self) -> u64 {
        self.checked_norm().expect("norm checked at construction")
    }
}

/// Trial-division factorization into monic irreducibles with multiplicities,
/// sorted in canonical order.  The unit leading coefficient is dropped.
pub fn factor(f: &Poly) -> Result<Vec<(Prime, u32)>> {
    if f.is_zero() {
        return Err(Error::invalid("cannot factor the zero polynomial"));
    }
    let field = f.field().clone();
    let mut rem = f.monic();
    let mut out: Vec<(Prime, u32)> = Vec::new();
    let mut d = 1u32;
    while 2 * (d as i64) <= rem.degree().finite().unwrap_or(0) {
        for poly in monic_polys_of_degree(&field, d) {
            // Lower-degree factors are already removed, so any divisor of
            // degree d is irreducible.
            if !poly.divides(&rem) {
                continue;
            }
            let mut mult = 0u32;
            while poly.divides(&rem) {
                rem = rem.div_exact(&poly);
                mult += 1;
            }
            out.push((Prime { poly }, mult));
            if rem.is_constant() {
                break;
            }
        }
        d += 1;
    }
    if !rem.is_constant() {
        out.push((Prime { poly: rem }, 1));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Places, rational functions, valuations
// ---------------------------------------------------------------------------

/// A place of F_q(T): a finite prime or the place at infinity (1/T).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Place {
    Finite(Prime),
    Infinity,
}

impl Place {
    /// Residue field degree over F_q; the infinite place of F_q(T) has
    /// degree 1.
    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite(p) => p.degree(),
            Place::Infinity => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "infinity"),
        }
    }
}

/// Value of a valuation, with v(0) = +∞ absorbing in min/plus.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Valuation {
    Finite(i64),
    PosInfinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PosInfinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::PosInfinity
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::PosInfinity => write!(f, "+inf"),
        }
    }
}

/// Multiplicity of a prime in a polynomial (+∞ for the zero polynomial).
pub fn multiplicity(f: &Poly, p: &Prime) -> Valuation {
    if f.is_zero() {
        return Valuation::PosInfinity;
    }
    let mut m = 0i64;
    let mut rem = f.clone();
    loop {
        let (q, r) = rem.divmod(p.poly()).expect("prime is nonzero");
        if !r.is_zero() {
            return Valuation::Finite(m);
        }
        m += 1;
        rem = q;
    }
}

/// An element of F_q(T) in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> RationalFunction {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            let field = num.field().clone();
            return RationalFunction {
                num,
                den: Poly::one(&field),
            };
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g);
        let den = den.div_exact(&g);
        let lc_inv = den
            .field()
            .inv(den.leading().unwrap())
            .expect("nonzero leading coefficient");
        RationalFunction {
            num: num.mul_elem(&lc_inv),
            den: den.mul_elem(&lc_inv),
        }
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        let one = Poly::one(p.field());
        RationalFunction { num: p, den: one }
    }

    pub fn zero(field: &Field) -> RationalFunction {
        RationalFunction::from_poly(Poly::zero(field))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying polynomial if the denominator is trivial.
    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_constant() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        Self::reduced(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFunction {
        Self::reduced(self.num.mul(p), self.den.clone())
    }
}

/// Normalized valuation of x at a place: multiplicity of the prime in
/// num minus den, or deg(den) - deg(num) at infinity.  v(0) = +∞.
pub fn valuation(x: &RationalFunction, place: &Place) -> Valuation {
    if x.is_zero() {
        return Valuation::PosInfinity;
    }
    match place {
        Place::Finite(p) => {
            let vn = multiplicity(x.num(), p).finite().expect("nonzero numerator");
            let vd = multiplicity(x.den(), p).finite().expect("nonzero denominator");
            Valuation::Finite(vn - vd)
        }
        Place::Infinity => {
            let dn = x.num().degree().finite().expect("nonzero numerator");
            let dd = x.den().degree().finite().expect("nonzero denominator");
            Valuation::Finite(dd - dn)
        }
    }
}
