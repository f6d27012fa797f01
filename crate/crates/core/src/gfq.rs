//! Arithmetic in the finite field F_q with q = p^e ≤ 2^20.
//!
//! Extension fields are realised as F_p[x]/(m) where m is the *first* monic
//! irreducible of degree e in the canonical polynomial order (coefficient
//! tuples compared from the constant term upward, constant term most
//! significant).  Fixing the modulus this way makes every element, and hence
//! every census downstream, reproducible across runs and machines.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.  Keeps all element indices and norms
/// comfortably inside 64-bit arithmetic.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

// ---------------------------------------------------------------------------
// Dense polynomials over F_p, used only to pick and apply the field modulus.
// Coefficients are stored constant term first with no trailing zeros.
// ---------------------------------------------------------------------------

fn base_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    debug_assert!(!b.is_empty() && b[b.len() - 1] == 1, "divisor must be monic");
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db {
        let lead = r[r.len() - 1];
        if lead != 0 {
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate().take(db) {
                let sub = (lead * bi) % p;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

/// Monic degree-d polynomial over F_p from an enumeration index, lower
/// coefficients most significant so that increasing index is increasing
/// canonical order.
fn base_monic_from_index(d: u32, mut idx: u64, p: u64) -> Vec<u64> {
    let mut coeffs = vec![0u64; d as usize + 1];
    coeffs[d as usize] = 1;
    for i in (0..d as usize).rev() {
        coeffs[i] = idx % p;
        idx /= p;
    }
    coeffs
}

fn base_is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    for d in 1..=(e / 2) as u32 {
        let count = p.pow(d);
        for idx in 0..count {
            let g = base_monic_from_index(d, idx, p);
            if base_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree e over F_p in canonical order.
fn first_irreducible(p: u64, e: u32) -> Vec<u64> {
    let count = p.pow(e);
    for idx in 0..count {
        let f = base_monic_from_index(e, idx, p);
        // A zero constant term means T divides f; skip cheaply.
        if f[0] == 0 {
            continue;
        }
        if base_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible of every degree exists over F_p")
}

// ---------------------------------------------------------------------------
// Field and elements
// ---------------------------------------------------------------------------

#[derive(Debug, PartialEq, Eq)]
struct FieldRepr {
    p: u64,
    e: u32,
    q: u64,
    /// Monic irreducible modulus over F_p, constant term first, length e + 1.
    /// Empty for prime fields.
    modulus: Vec<u64>,
}

/// The finite field F_q, q = p^e.  Cheap to clone and share across threads.
#[derive(Clone)]
pub struct Field {
    repr: Arc<FieldRepr>,
}

/// An element of F_q as coordinates over the power basis of the modulus root
/// (a single residue for prime fields).  Representations are canonical, so
/// derived equality and ordering agree with the field's canonical element
/// order: coefficient tuples compared from the constant term upward.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem {
    coeffs: Vec<u64>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.repr, &other.repr) || self.repr == other.repr
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gf({})", self.repr.q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gf({})", self.repr.q)
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "[")?;
            for (i, c) in self.coeffs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, "]")
        }
    }
}

impl FqElem {
    /// Basis coordinates, constant term first; a single residue for prime
    /// fields.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl Field {
    /// Construct F_{p^e}.  Rejects composite p, e = 0, and p^e > 2^20.
    pub fn new(p: u64, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::invalid("extension degree must be at least 1"));
        }
        let q = match p.checked_pow(e) {
            Some(q) if q <= MAX_FIELD_SIZE => q,
            Some(q) => return Err(Error::FieldTooLarge(q)),
            None => return Err(Error::FieldTooLarge(u64::MAX)),
        };
        let modulus = if e == 1 { Vec::new() } else { first_irreducible(p, e) };
        Ok(Field {
            repr: Arc::new(FieldRepr { p, e, q, modulus }),
        })
    }

    /// Construct F_q from the field size, factoring q = p^e.
    pub fn from_order(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::invalid(format!("{q} is not a prime power")));
        }
        // Find the smallest prime factor; q must be a pure power of it.
        let mut p = q;
        for d in 2..=q {
            if d * d > q {
                break;
            }
            if q % d == 0 {
                p = d;
                break;
            }
        }
        let mut e = 0u32;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::invalid(format!("{q} is not a prime power")));
        }
        Field::new(p, e)
    }

    pub fn p(&self) -> u64 {
        self.repr.p
    }

    pub fn e(&self) -> u32 {
        self.repr.e
    }

    pub fn q(&self) -> u64 {
        self.repr.q
    }

    /// Modulus of the extension, constant term first (None for prime fields).
    pub fn modulus(&self) -> Option<&[u64]> {
        if self.repr.e == 1 {
            None
        } else {
            Some(&self.repr.modulus)
        }
    }

    fn check(&self, a: &FqElem) {
        assert_eq!(
            a.coeffs.len(),
            self.repr.e as usize,
            "element does not belong to {self}"
        );
        debug_assert!(a.coeffs.iter().all(|&c| c < self.repr.p));
    }

    pub fn zero(&self) -> FqElem {
        FqElem {
            coeffs: vec![0; self.repr.e as usize],
        }
    }

    pub fn one(&self) -> FqElem {
        self.from_residue(1)
    }

    /// Embed an integer residue via the prime subfield.
    pub fn from_residue(&self, r: u64) -> FqElem {
        let mut coeffs = vec![0; self.repr.e as usize];
        coeffs[0] = r % self.repr.p;
        FqElem { coeffs }
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<FqElem> {
        if coeffs.len() != self.repr.e as usize {
            return Err(Error::invalid(format!(
                "expected {} coordinates for an element of {self}, got {}",
                self.repr.e,
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.repr.p) {
            return Err(Error::invalid(format!(
                "coordinate {c} out of range for characteristic {}",
                self.repr.p
            )));
        }
        Ok(FqElem { coeffs })
    }

    pub fn is_one(&self, a: &FqElem) -> bool {
        self.check(a);
        a.coeffs[0] == 1 && a.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.check(a);
        self.check(b);
        let p = self.repr.p;
        FqElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        self.check(a);
        let p = self.repr.p;
        FqElem {
            coeffs: a.coeffs.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.check(a);
        self.check(b);
        let p = self.repr.p;
        let e = self.repr.e as usize;
        if e == 1 {
            return FqElem {
                coeffs: vec![(a.coeffs[0] * b.coeffs[0]) % p],
            };
        }
        // Convolution; p ≤ 2^10 whenever e ≥ 2, so sums stay far below 2^64.
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        for c in prod.iter_mut() {
            *c %= p;
        }
        // Fold degrees ≥ e down through x^e ≡ -(m_0 + ... + m_{e-1} x^{e-1}).
        let m = &self.repr.modulus;
        for i in (e..2 * e - 1).rev() {
            let c = prod[i];
            if c != 0 {
                prod[i] = 0;
                for j in 0..e {
                    let sub = (c * m[j]) % p;
                    prod[i - e + j] = (prod[i - e + j] + p - sub) % p;
                }
            }
        }
        prod.truncate(e);
        FqElem { coeffs: prod }
    }

    pub fn pow(&self, a: &FqElem, mut k: u64) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        self.check(a);
        if a.is_zero() {
            return Err(Error::ZeroInversion(self.to_string()));
        }
        Ok(self.pow(a, self.repr.q - 2))
    }

    /// Index of an element in the canonical order; inverse of
    /// [`Field::element_from_index`].
    pub fn element_index(&self, a: &FqElem) -> u64 {
        self.check(a);
        let p = self.repr.p;
        a.coeffs.iter().fold(0, |acc, &c| acc * p + c)
    }

    /// Element with the given canonical index: the constant term is the most
    /// significant base-p digit, so index order is the canonical lex order.
    pub fn element_from_index(&self, mut k: u64) -> FqElem {
        assert!(k < self.repr.q, "element index out of range");
        let p = self.repr.p;
        let e = self.repr.e as usize;
        let mut coeffs = vec![0u64; e];
        for i in (0..e).rev() {
            coeffs[i] = k % p;
            k /= p;
        }
        FqElem { coeffs }
    }

    /// All q elements in canonical order, starting from zero.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.repr.q).map(move |k| self.element_from_index(k))
    }

    /// The q - 1 nonzero elements in canonical order.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (1..self.repr.q).map(move |k| self.element_from_index(k))
    }
}
