//! Exact-rational leading constants for the height censuses.
//!
//! The number of points of P(w)(K) of height ≤ b grows like κ · q^{|w|·b}
//! (for K = F_q(T); general curves enter only through their genus, class
//! number, and infinite-place degree).  The constant is
//!
//!   κ = h_K · gcd(q-1, w) / (ζ_K(|w|) · q^{#w·(g-1)} · (q-1)) · (∞-factor)
//!       · Π_p (local densities),
//!
//! with ζ_K the zeta function of the function field.  For K = F_q(T),
//!
//!   ζ_K(s) = q^{2s} / ((q^s - 1)(q^s - q)),
//!
//! and the unconditioned Drinfeld rank-r census has κ = q^r / ζ_K(|w_r|)
//! with w_r = (q-1, ..., q^r - 1).
//!
//! Census predictions are evaluated at *two* exponent candidates when they
//! disagree: |w_r| = Σ (q^i - 1), which is what the space of coordinate
//! tuples actually scales by, and the closed form Σ q^i = (q^{r+1}-q)/(q-1)
//! that has circulated alongside the counting constants.  The convergence
//! table downstream adjudicates empirically between them.

use num::{BigInt, BigRational, One, Zero};

use crate::drinfeld::{drinfeld_weights, LocalCondition};
use crate::error::{Error, Result};
use crate::polyfq::Prime;
use crate::wps::WeightVector;

/// Refuse to expand q^{|w|} as a big integer beyond this many bits; the
/// density factors remain available when the full constant is infeasible.
const MAX_ZETA_BITS: f64 = 100_000.0;

/// Parameters of the base function field: a curve of genus g over F_q with
/// h_K degree-zero divisor classes and an infinite place of degree d_∞.
/// Exact enumeration in this crate only runs over K = F_q(T); for other
/// curves supply `zeta_value`, the precomputed ζ_K(|w|).
#[derive(Clone, Debug)]
pub struct CurveParams {
    pub q: u64,
    pub genus: u32,
    pub class_number: u64,
    pub d_infinity: u32,
    pub zeta_value: Option<BigRational>,
}

impl CurveParams {
    /// The projective line: K = F_q(T), genus 0, h = 1, d_∞ = 1.
    pub fn rational(q: u64) -> CurveParams {
        CurveParams {
            q,
            genus: 0,
            class_number: 1,
            d_infinity: 1,
            zeta_value: None,
        }
    }
}

fn big_pow(base: u64, exp: u64) -> BigInt {
    BigInt::from(base).pow(exp.try_into().expect("exponent fits u32"))
}

fn check_zeta_feasible(q: u64, s: u64) -> Result<()> {
    if s as f64 * (q as f64).log2() > MAX_ZETA_BITS {
        return Err(Error::invalid(format!(
            "zeta argument {s} too large to evaluate exactly for q = {q}"
        )));
    }
    Ok(())
}

/// ζ_{F_q(T)}(s) = q^{2s} / ((q^s - 1)(q^s - q)) as an exact rational;
/// requires s ≥ 2 (the series diverges at s = 1).
pub fn zeta_fqt(q: u64, s: u64) -> Result<BigRational> {
    if s < 2 {
        return Err(Error::invalid("zeta_fqt requires s >= 2"));
    }
    check_zeta_feasible(q, s)?;
    let qs = big_pow(q, s);
    let num = &qs * &qs;
    let den = (&qs - 1) * (&qs - BigInt::from(q));
    Ok(BigRational::new(num, den))
}

/// ζ_{F_q(T)}(s)^{-1} = (1 - q^{-s})(1 - q^{1-s}), the product of the
/// inverted Euler factors over all places including infinity.
pub fn zeta_fqt_inv(q: u64, s: u64) -> Result<BigRational> {
    Ok(zeta_fqt(q, s)?.recip())
}

/// A predicted counting asymptotic: count(b) ≈ leading · q^{exponent · b},
/// with an error term of size q^{error_exponent · b} (times log q^b when
/// `log_factor` is set).
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticPrediction {
    /// Product of the local condition densities (1 for an unconditioned
    /// census); always available exactly.
    pub density: BigRational,
    /// Full leading constant κ including the zeta and infinite-place
    /// factors; `None` when q^{|w|} is too large to expand exactly.
    pub leading: Option<BigRational>,
    /// Growth exponent |w| = Σ w_i.
    pub exponent: u64,
    /// Alternative closed-form exponent to adjudicate against, when it
    /// differs from `exponent`.
    pub alt_exponent: Option<u64>,
    /// Exponent of the error term: |w| - min(w)/d_∞.
    pub error_exponent: i64,
    /// Whether the error term carries a log q^b factor (#w - 1 = d_∞ = 1).
    pub log_factor: bool,
    /// Base field size, kept so predictions can be evaluated at a height.
    pub q: u64,
}

impl AsymptoticPrediction {
    /// Predicted count at height b for a given exponent candidate, when the
    /// full constant is available.
    pub fn predicted_at(&self, b: u32, exponent: u64) -> Option<BigRational> {
        let leading = self.leading.as_ref()?;
        Some(leading * BigRational::from(big_pow(self.q, exponent * b as u64)))
    }

    /// Exponent candidates in adjudication order: the tuple-scaling
    /// exponent first, then the alternative if it differs.
    pub fn exponent_candidates(&self) -> Vec<u64> {
        let mut v = vec![self.exponent];
        if let Some(alt) = self.alt_exponent {
            if alt != self.exponent {
                v.push(alt);
            }
        }
        v
    }
}

/// Serialize a prediction to the interchange JSON shape.
pub fn prediction_to_json(p: &AsymptoticPrediction) -> serde_json::Value {
    let mut obj = serde_json::Map::new();
    obj.insert(
        "density_num".into(),
        serde_json::Value::String(p.density.numer().to_string()),
    );
    obj.insert(
        "density_den".into(),
        serde_json::Value::String(p.density.denom().to_string()),
    );
    if let Some(leading) = &p.leading {
        obj.insert(
            "leading_num".into(),
            serde_json::Value::String(leading.numer().to_string()),
        );
        obj.insert(
            "leading_den".into(),
            serde_json::Value::String(leading.denom().to_string()),
        );
    }
    obj.insert("exponent".into(), serde_json::Value::from(p.exponent));
    if let Some(alt) = p.alt_exponent {
        obj.insert("alt_exponent".into(), serde_json::Value::from(alt));
    }
    obj.insert(
        "error_exponent".into(),
        serde_json::Value::from(p.error_exponent),
    );
    obj.insert("log_factor".into(), serde_json::Value::from(p.log_factor));
    serde_json::Value::Object(obj)
}

/// Leading constant for the height census of P(w)(K) with optional local
/// density factors already multiplied into `local_densities`.
pub fn kappa_wps(
    params: &CurveParams,
    w: &WeightVector,
    local_densities: &[BigRational],
) -> Result<AsymptoticPrediction> {
    let q = params.q;
    if q < 2 {
        return Err(Error::invalid("q must be a prime power at least 2"));
    }
    let total = w.total();
    if total < 2 {
        return Err(Error::invalid(
            "total weight must be at least 2 for the census to converge",
        ));
    }
    let density: BigRational = local_densities
        .iter()
        .fold(BigRational::one(), |acc, d| acc * d);

    let zeta = match &params.zeta_value {
        Some(z) => {
            if z.is_zero() {
                return Err(Error::invalid("zeta value must be nonzero"));
            }
            Some(z.clone())
        }
        None if params.genus == 0 => match zeta_fqt(q, total) {
            Ok(z) => Some(z),
            Err(Error::Invalid(_)) => None,
            Err(e) => return Err(e),
        },
        None => {
            return Err(Error::invalid(
                "genus > 0 requires an explicit zeta value",
            ))
        }
    };

    let leading = zeta.map(|zeta| {
        let unit_gcd = w.unit_gcd(q);
        let h = BigRational::from(BigInt::from(params.class_number));
        let base = h * BigRational::from(BigInt::from(unit_gcd))
            / (zeta * BigRational::from(BigInt::from(q - 1)));
        // q^{#w (g-1)} in the denominator; genus 0 makes it q^{-#w}.
        let n_coords = w.len() as i64;
        let g_shift = (params.genus as i64 - 1) * n_coords;
        let shift = if g_shift >= 0 {
            BigRational::from(big_pow(q, g_shift as u64)).recip()
        } else {
            BigRational::from(big_pow(q, (-g_shift) as u64))
        };
        base * shift * &density
    });

    let error_exponent = total as i64 - (w.min() / params.d_infinity as u64).max(0) as i64;
    let log_factor = w.len() == 2 && params.d_infinity == 1;
    Ok(AsymptoticPrediction {
        density,
        leading,
        exponent: total,
        alt_exponent: None,
        error_exponent,
        log_factor,
        q,
    })
}

fn check_distinct_primes(conditions: &[(Prime, LocalCondition)]) -> Result<()> {
    for i in 0..conditions.len() {
        for j in i + 1..conditions.len() {
            if conditions[i].0 == conditions[j].0 {
                return Err(Error::RepeatedPrime(conditions[i].0.to_string()));
            }
        }
    }
    Ok(())
}

/// Closed-form alternative exponent Σ_{i=1}^r q^i = (q^{r+1} - q)/(q - 1),
/// when it fits in u64.
pub fn drinfeld_alt_exponent(q: u64, r: u32) -> Option<u64> {
    let mut total: u64 = 0;
    let mut power: u64 = 1;
    for _ in 0..r {
        power = power.checked_mul(q)?;
        total = total.checked_add(power)?;
    }
    Some(total)
}

/// Prediction for the census of rank-r Drinfeld modules over F_q(T) with
/// reduction-type conditions at finitely many distinct primes:
/// κ = (Π κ_{L_i}) · q^r / ζ_K(|w_r|), growing like q^{|w_r| b}.
pub fn kappa_drinfeld_finite(
    q: u64,
    r: u32,
    conditions: &[(Prime, LocalCondition)],
) -> Result<AsymptoticPrediction> {
    check_distinct_primes(conditions)?;
    let w = drinfeld_weights(q, r)?;
    let mut local = Vec::with_capacity(conditions.len());
    for (p, c) in conditions {
        local.push(c.kappa(p.norm(), r)?);
    }
    let mut pred = kappa_wps(&CurveParams::rational(q), &w, &local)?;
    pred.alt_exponent = drinfeld_alt_exponent(q, r).filter(|&alt| alt != pred.exponent);
    Ok(pred)
}

/// Prediction for rank-r modules with stable reduction of rank ≥ s at
/// *every* finite prime, plus further conditions at the distinct primes of
/// S.  The density factor is
///
///   ζ_K(r-s+1)^{-1} · Π_{p ∈ S} κ_{L_p} / (1 - N(p)^{-(r-s+1)}),
///
/// where ζ_K(r-s+1)^{-1} also equals (1 - q^{-(r-s)})(1 - q^{-(r-s+1)}).
pub fn kappa_drinfeld_everywhere(
    q: u64,
    r: u32,
    s: u32,
    conditions: &[(Prime, LocalCondition)],
) -> Result<AsymptoticPrediction> {
    if s < 1 || s >= r {
        return Err(Error::RankOutOfRange { s, r });
    }
    check_distinct_primes(conditions)?;
    let sp = (r - s + 1) as u64;
    let zeta_inv = zeta_fqt_inv(q, sp)?;
    let w = drinfeld_weights(q, r)?;
    let mut local = vec![zeta_inv];
    for (p, c) in conditions {
        c.validate(r)?;
        let norm = BigInt::from(p.norm());
        let euler = BigRational::one()
            - BigRational::new(BigInt::one(), norm.pow(sp.try_into().unwrap()));
        local.push(c.kappa(p.norm(), r)? / euler);
    }
    let mut pred = kappa_wps(&CurveParams::rational(q), &w, &local)?;
    pred.alt_exponent = drinfeld_alt_exponent(q, r).filter(|&alt| alt != pred.exponent);
    Ok(pred)
}
