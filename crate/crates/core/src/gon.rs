//! Box counts behind the asymptotic constants.
//!
//! Over F_q(T) the "unit ball scaled by q^{d}" at the infinite place is the
//! set of polynomials of degree ≤ d, which has exactly q^{d+1} elements —
//! there is no rounding error in this geometry.  A box is a product of
//! per-coordinate degree bounds D_i = t·w_i + d_i together with congruence
//! conditions x_i ≡ a_i mod p_i; its exact lattice-point count is compared
//! against the volume-style main term
//!
//!   Π_i q^{d_i} · Π_j N(p_j)^{-1} · q^n · q^{t·|w|},
//!
//! the q^n being the genus-0 covolume factor q^{n(1-g)}.  For pure degree
//! boxes and single congruences the two agree exactly, which is what pins
//! the constants in [`crate::asymptotics`] to honest counts.

use num::{BigInt, BigRational, One};

use crate::error::{Error, Result};
use crate::gfq::Field;
use crate::polyfq::{enumerate_polys, Poly, Prime};
use crate::text::parse_poly;
use crate::wps::{WeightVector, HARD_MAX_WORK_LOG2};

/// A congruence condition `x_coord ≡ residue mod prime` on one coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub coord: usize,
    pub prime: Prime,
    pub residue: Poly,
}

/// An n-dimensional box: per-coordinate degree offsets d_i (bounds become
/// t·w_i + d_i when scaled to level t) plus congruence conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSpec {
    pub dim: usize,
    pub bounds: Vec<i64>,
    pub congruences: Vec<Congruence>,
}

impl BoxSpec {
    pub fn new(dim: usize, bounds: Vec<i64>, congruences: Vec<Congruence>) -> Result<BoxSpec> {
        if dim == 0 {
            return Err(Error::invalid("box dimension must be positive"));
        }
        if bounds.len() != dim {
            return Err(Error::invalid(format!(
                "{} bounds for a {dim}-dimensional box",
                bounds.len()
            )));
        }
        for c in &congruences {
            if c.coord >= dim {
                return Err(Error::invalid(format!(
                    "congruence on coordinate {} of a {dim}-dimensional box",
                    c.coord
                )));
            }
            if c.residue.degree() >= c.prime.poly().degree() {
                return Err(Error::invalid(
                    "congruence residue must be reduced mod the prime",
                ));
            }
        }
        Ok(BoxSpec {
            dim,
            bounds,
            congruences,
        })
    }

    /// Parse the JSON interchange shape
    /// `{"n": 2, "bounds": [0, -1], "congruences": [{"coord": 0, "prime": "T", "residue": "1"}]}`.
    pub fn from_json(field: &Field, text: &str) -> Result<BoxSpec> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("box JSON: {e}")))?;
        let dim = v
            .get("n")
            .and_then(|n| n.as_u64())
            .ok_or_else(|| Error::parse("box JSON needs a positive integer field \"n\""))?
            as usize;
        let bounds: Vec<i64> = v
            .get("bounds")
            .and_then(|b| b.as_array())
            .ok_or_else(|| Error::parse("box JSON needs an array field \"bounds\""))?
            .iter()
            .map(|x| {
                x.as_i64()
                    .ok_or_else(|| Error::parse("box bounds must be integers"))
            })
            .collect::<Result<_>>()?;
        let mut congruences = Vec::new();
        if let Some(list) = v.get("congruences") {
            let list = list
                .as_array()
                .ok_or_else(|| Error::parse("\"congruences\" must be an array"))?;
            for c in list {
                let coord = c
                    .get("coord")
                    .and_then(|x| x.as_u64())
                    .ok_or_else(|| Error::parse("congruence needs \"coord\""))?
                    as usize;
                let prime_str = c
                    .get("prime")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| Error::parse("congruence needs \"prime\""))?;
                let residue_str = c
                    .get("residue")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| Error::parse("congruence needs \"residue\""))?;
                congruences.push(Congruence {
                    coord,
                    prime: Prime::new(parse_poly(field, prime_str)?)?,
                    residue: parse_poly(field, residue_str)?,
                });
            }
        }
        BoxSpec::new(dim, bounds, congruences)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.dim,
            "bounds": self.bounds,
            "congruences": self
                .congruences
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "coord": c.coord,
                        "prime": c.prime.to_string(),
                        "residue": c.residue.to_string(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// Exact number of integral tuples in the box scaled to level t, together
/// with the volume-style main term.  The box is a product, so the count is
/// a product of per-coordinate counts.
pub fn count_box(
    field: &Field,
    spec: &BoxSpec,
    w: &WeightVector,
    t: u32,
    max_work_log2: f64,
) -> Result<(BigInt, BigRational)> {
    if w.len() != spec.dim {
        return Err(Error::invalid(format!(
            "weight vector of length {} for a {}-dimensional box",
            w.len(),
            spec.dim
        )));
    }
    let q = field.q();
    let logq = (q as f64).log2();
    let bound = max_work_log2.min(HARD_MAX_WORK_LOG2);

    let mut count = BigInt::one();
    for i in 0..spec.dim {
        let d_i = t as i64 * w.weights()[i] as i64 + spec.bounds[i];
        let coord_congs: Vec<&Congruence> = spec
            .congruences
            .iter()
            .filter(|c| c.coord == i)
            .collect();
        if coord_congs.is_empty() {
            // Polynomials of degree ≤ d_i: q^{d_i + 1}, or the zero
            // polynomial alone when d_i < 0.
            if d_i >= 0 {
                count *= big_pow(q, (d_i + 1) as u64);
            }
            continue;
        }
        let needed = (d_i + 1).max(0) as f64 * logq;
        if needed > bound {
            return Err(Error::WorkLimit { needed, bound });
        }
        let mut coord_count = 0u64;
        for x in enumerate_polys(field, d_i)? {
            if coord_congs
                .iter()
                .all(|c| x.sub(&c.residue).rem(c.prime.poly()).unwrap().is_zero())
            {
                coord_count += 1;
            }
        }
        count *= BigInt::from(coord_count);
    }

    // Main term: Π q^{d_i} · Π N(p_j)^{-1} · q^n · q^{t|w|}.
    let mut main = BigRational::one();
    for &d in &spec.bounds {
        main *= pow_rational(q, d);
    }
    for c in &spec.congruences {
        main /= BigRational::from(BigInt::from(c.prime.norm()));
    }
    main *= pow_rational(q, spec.dim as i64);
    main *= pow_rational(q, t as i64 * w.total() as i64);
    Ok((count, main))
}

fn big_pow(base: u64, exp: u64) -> BigInt {
    BigInt::from(base).pow(exp.try_into().expect("exponent fits u32"))
}

fn pow_rational(base: u64, exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from(big_pow(base, exp as u64))
    } else {
        BigRational::from(big_pow(base, (-exp) as u64)).recip()
    }
}

/// Scan a range of scaling levels and report count - main_term at each.
pub fn box_error_scan(
    field: &Field,
    spec: &BoxSpec,
    w: &WeightVector,
    t_min: u32,
    t_max: u32,
    max_work_log2: f64,
) -> Result<Vec<(u32, BigInt, BigRational, BigRational)>> {
    let mut out = Vec::new();
    for t in t_min..=t_max {
        let (count, main) = count_box(field, spec, w, t, max_work_log2)?;
        let err = BigRational::from(count.clone()) - &main;
        out.push((t, count, main, err));
    }
    Ok(out)
}

/// Number of nonzero tuples with max_i ceil(deg(x_i)/w_i) = b exactly: the
/// shell F(b) of the weighted degree filtration, counted through box
/// differences.
pub fn weighted_shell_count(
    field: &Field,
    w: &WeightVector,
    b: u32,
    max_work_log2: f64,
) -> Result<BigInt> {
    let spec = BoxSpec::new(w.len(), vec![0; w.len()], vec![])?;
    let (outer, _) = count_box(field, &spec, w, b, max_work_log2)?;
    if b == 0 {
        return Ok(outer - 1);
    }
    let (inner, _) = count_box(field, &spec, w, b - 1, max_work_log2)?;
    Ok(outer - inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    fn w(ws: &[u64]) -> WeightVector {
        WeightVector::new(ws.to_vec()).unwrap()
    }

    #[test]
    fn pure_boxes_have_zero_error() {
        // Without congruences the count is exactly the main term.
        for q in [2u64, 3] {
            let f = gf(q);
            for (dim, ws, bounds) in [
                (1usize, vec![1u64], vec![2i64]),
                (2, vec![1, 1], vec![0, 0]),
                (2, vec![1, 3], vec![1, -1]),
                (3, vec![1, 2, 3], vec![0, 1, 0]),
            ] {
                let spec = BoxSpec::new(dim, bounds, vec![]).unwrap();
                let wv = w(&ws);
                for t in 0..3u32 {
                    let (count, main) = count_box(&f, &spec, &wv, t, 34.0).unwrap();
                    assert_eq!(BigRational::from(count), main, "q={q} t={t}");
                }
            }
        }
    }

    #[test]
    fn congruence_boxes_have_zero_error() {
        let f = gf(2);
        let t_prime = Prime::new(parse_poly(&f, "T").unwrap()).unwrap();
        let spec = BoxSpec::new(
            2,
            vec![0, 0],
            vec![Congruence {
                coord: 0,
                prime: t_prime.clone(),
                residue: parse_poly(&f, "1").unwrap(),
            }],
        )
        .unwrap();
        let wv = w(&[1, 1]);
        for t in 0..4u32 {
            let (count, main) = count_box(&f, &spec, &wv, t, 34.0).unwrap();
            assert_eq!(BigRational::from(count), main, "t={t}");
        }
        // Two congruences on different coordinates still factor.
        let spec2 = BoxSpec::new(
            2,
            vec![0, 0],
            vec![
                Congruence {
                    coord: 0,
                    prime: t_prime.clone(),
                    residue: parse_poly(&f, "1").unwrap(),
                },
                Congruence {
                    coord: 1,
                    prime: t_prime,
                    residue: parse_poly(&f, "0").unwrap(),
                },
            ],
        )
        .unwrap();
        for (_, _, _, err) in box_error_scan(&f, &spec2, &wv, 0, 3, 34.0).unwrap() {
            assert!(err.is_zero());
        }
    }

    #[test]
    fn degenerate_bounds() {
        // d_i = -1 at t = 0 leaves only the zero polynomial in that
        // coordinate; count 1, main term q^{-1}·q = 1.
        let f = gf(3);
        let spec = BoxSpec::new(1, vec![-1], vec![]).unwrap();
        let (count, main) = count_box(&f, &spec, &w(&[1]), 0, 34.0).unwrap();
        assert_eq!(count, BigInt::one());
        assert_eq!(main, BigRational::one());
    }

    #[test]
    fn shell_counts() {
        // q=2, w=(1,1): shells 3, 12, 48 for b = 0, 1, 2.
        let f = gf(2);
        let wv = w(&[1, 1]);
        let shells: Vec<BigInt> = (0..3)
            .map(|b| weighted_shell_count(&f, &wv, b, 34.0).unwrap())
            .collect();
        assert_eq!(shells, vec![3.into(), 12.into(), 48.into()]);
    }

    #[test]
    fn json_round_trip() {
        let f = gf(2);
        let text = r#"{"n":2,"bounds":[0,-1],"congruences":[{"coord":0,"prime":"T","residue":"1"}]}"#;
        let spec = BoxSpec::from_json(&f, text).unwrap();
        assert_eq!(spec.dim, 2);
        assert_eq!(spec.bounds, vec![0, -1]);
        assert_eq!(spec.congruences.len(), 1);
        let back = BoxSpec::from_json(&f, &spec.to_json().to_string()).unwrap();
        assert_eq!(spec, back);
        // Validation errors.
        assert!(BoxSpec::from_json(&f, r#"{"bounds":[0]}"#).is_err());
        assert!(BoxSpec::new(2, vec![0], vec![]).is_err());
    }
}
