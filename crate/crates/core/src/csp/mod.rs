//! Predicate analysis and CSP refutation through separating polynomials.

mod lp;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::instances::{character, CspInstance, Predicate, XorInstance};
use crate::refute::{refute_poly, RefutationCertificate, RefuteConfig};
use crate::{Error, Result};
use lp::{rat, solve, LpOutcome, StandardLp};

/// Largest arity the exact LPs accept.
pub const MAX_LP_ARITY: u32 = 8;

/// `P̂(S) = 2^{-k} Σ_z P(z) χ_S(z)`, indexed by subset bitmask.
pub fn fourier(p: &Predicate) -> Vec<Rational64> {
    p.fourier().to_vec()
}

fn check_arity(p: &Predicate) -> Result<()> {
    if p.k() > MAX_LP_ARITY {
        return Err(Error::guard(format!("arity {} above the LP cap of {MAX_LP_ARITY}", p.k())));
    }
    Ok(())
}

/// Nonempty subsets of `[k]` of size at most `t`, as bitmasks in increasing order.
fn low_sets(k: u32, t: u32) -> Vec<usize> {
    (1..1usize << k).filter(|s| s.count_ones() <= t).collect()
}

/// A distribution on `P^{-1}(1)` whose moments of order `1..=t` all vanish,
/// as `(point mask, probability)` pairs, or `None` if there is none.
pub fn t_wise_distribution(p: &Predicate, t: u32) -> Result<Option<Vec<(usize, BigRational)>>> {
    check_arity(p)?;
    if p.is_constant_zero() {
        return Err(Error::param("predicate has no satisfying assignment"));
    }
    let k = p.k();
    let points: Vec<usize> = (0..1usize << k).filter(|&z| p.value_at(z)).collect();
    let mut a = vec![points.iter().map(|_| rat(1)).collect::<Vec<_>>()];
    let mut b = vec![rat(1)];
    for s in low_sets(k, t) {
        a.push(points.iter().map(|&z| rat(character(s, z))).collect());
        b.push(rat(0));
    }
    let lp = StandardLp {
        a,
        b,
        c: vec![BigRational::zero(); points.len()],
    };
    Ok(match solve(&lp) {
        LpOutcome::Optimal { x, .. } => Some(points.into_iter().zip(x).filter(|(_, w)| !w.is_zero()).collect()),
        _ => None,
    })
}

pub fn has_t_wise_support(p: &Predicate, t: u32) -> Result<bool> {
    Ok(t_wise_distribution(p, t)?.is_some())
}

/// Smallest `t` in `1..=k` for which `P` has no `t`-wise uniform support.
pub fn support_threshold(p: &Predicate) -> Result<u32> {
    for t in 1..=p.k() {
        if !has_t_wise_support(p, t)? {
            return Ok(t);
        }
    }
    Err(Error::param("predicate is always true"))
}

/// `Q` of degree at most `t` without constant term and the largest `δ` with
/// `P(z) ≤ 1 - δ + Q(z)` at every point.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatingPolynomial {
    pub k: u32,
    pub t: u32,
    pub delta: BigRational,
    /// Nonzero coefficients by subset bitmask.
    pub qhat: BTreeMap<usize, BigRational>,
}

impl SeparatingPolynomial {
    pub fn eval(&self, z: usize) -> BigRational {
        self.qhat
            .iter()
            .fold(BigRational::zero(), |acc, (&s, q)| acc + q * rat(character(s, z)))
    }

    /// Exact check of `P ≤ 1 - δ + Q` at all `2^k` points, the degree bound,
    /// and `Σ|Q̂| ≤ 4^k`.
    pub fn verify(&self, p: &Predicate) -> bool {
        if p.k() != self.k {
            return false;
        }
        let pointwise = (0..1usize << self.k).all(|z| {
            let pz = if p.value_at(z) { rat(1) } else { rat(0) };
            pz <= rat(1) - &self.delta + self.eval(z)
        });
        let degree = self.qhat.keys().all(|&s| s != 0 && s.count_ones() <= self.t);
        let mass = self.qhat.values().fold(BigRational::zero(), |acc, q| acc + q.abs());
        pointwise && degree && mass <= rat(1i64 << (2 * self.k))
    }
}

pub fn separating_polynomial(p: &Predicate, t: u32) -> Result<SeparatingPolynomial> {
    if has_t_wise_support(p, t)? {
        return Err(Error::param(format!("predicate has {t}-wise uniform support; no separator exists")));
    }
    let k = p.k();
    let sets = low_sets(k, t);
    let points = 1usize << k;
    // columns: δ+, δ-, (q+_S, q-_S) per set, one slack per point
    let width = 2 + 2 * sets.len() + points;
    let mut a = Vec::with_capacity(points);
    let mut b = Vec::with_capacity(points);
    for z in 0..points {
        let mut row = vec![BigRational::zero(); width];
        row[0] = rat(1);
        row[1] = rat(-1);
        for (j, &s) in sets.iter().enumerate() {
            let chi = character(s, z);
            row[2 + 2 * j] = rat(-chi);
            row[3 + 2 * j] = rat(chi);
        }
        row[2 + 2 * sets.len() + z] = rat(1);
        a.push(row);
        b.push(if p.value_at(z) { rat(0) } else { rat(1) });
    }
    let mut c = vec![BigRational::zero(); width];
    c[0] = rat(1);
    c[1] = rat(-1);
    let x = match solve(&StandardLp { a, b, c }) {
        LpOutcome::Optimal { x, .. } => x,
        other => return Err(Error::Invariant(format!("separating LP ended as {other:?}"))),
    };
    let delta = &x[0] - &x[1];
    let qhat = sets
        .iter()
        .enumerate()
        .map(|(j, &s)| (s, &x[2 + 2 * j] - &x[3 + 2 * j]))
        .filter(|(_, q)| !q.is_zero())
        .collect();
    let sep = SeparatingPolynomial { k, t, delta, qhat };
    if !sep.verify(p) {
        return Err(Error::Invariant("separating polynomial fails re-verification".into()));
    }
    Ok(sep)
}

/// `max E_ζ[P]` over `t`-wise uniform distributions `ζ` on all of `{±1}^k`.
/// Equals `1 - δ` for the optimal separator.
pub fn max_t_wise_mass(p: &Predicate, t: u32) -> Result<BigRational> {
    check_arity(p)?;
    let k = p.k();
    let points = 1usize << k;
    let mut a = vec![vec![rat(1); points]];
    let mut b = vec![rat(1)];
    for s in low_sets(k, t) {
        a.push((0..points).map(|z| rat(character(s, z))).collect());
        b.push(rat(0));
    }
    let c = (0..points).map(|z| if p.value_at(z) { rat(1) } else { rat(0) }).collect();
    match solve(&StandardLp { a, b, c }) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => Err(Error::Invariant(format!("moment LP ended as {other:?}"))),
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Smallest `f64` not below `r`.
fn ceil_f64(r: &BigRational) -> f64 {
    let mut v = to_f64(r);
    while BigRational::from_float(v).is_some_and(|fv| fv < *r) {
        v = v.next_up();
    }
    v
}

mod ratio_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(|_| serde::de::Error::custom(format!("bad rational {text:?}")))
    }
}

/// One Fourier piece `sign·φ_T` and its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    /// Positions of `T`, 1-based.
    pub set: Vec<u32>,
    #[serde(with = "ratio_str")]
    pub coeff: BigRational,
    /// Upper bound on `max_x sign(Q̂(T))·φ_T(x)`.
    pub bound: f64,
    pub method: TermMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<RefutationCertificate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermMethod {
    /// Degree one: the maximum is the exact ℓ1 mass.
    ExactL1,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CspCertificate {
    pub t: u32,
    #[serde(with = "ratio_str")]
    pub delta: BigRational,
    pub terms: Vec<TermRecord>,
    pub alg_val: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CspRefutation {
    pub alg_val: f64,
    pub certificate: CspCertificate,
}

/// The XOR instance `sign·φ_T`: clause `C_i|T` with coefficient
/// `sign·Π_{j∈T} Ξ_{i,j}`.
pub fn restrict_to(inst: &CspInstance, set: usize, sign: f64) -> Result<XorInstance> {
    let mut clauses = Vec::with_capacity(inst.m());
    let mut coeffs = Vec::with_capacity(inst.m());
    for (scope, lits) in inst.scopes.iter().zip(&inst.literals) {
        let mut c = Vec::new();
        let mut b = sign;
        for j in 0..inst.k as usize {
            if set >> j & 1 == 1 {
                c.push(scope[j]);
                b *= lits[j] as f64;
            }
        }
        clauses.push(c);
        coeffs.push(b);
    }
    XorInstance::new(inst.n, set.count_ones(), clauses, coeffs)
}

/// `max_x (1/m) Σ_i b_i x_{v_i}` for a degree-one instance, exactly.
fn degree_one_max(inst: &XorInstance) -> BigRational {
    let mut per_var = vec![0i64; inst.n as usize];
    for (c, &b) in inst.clauses.iter().zip(&inst.coeffs) {
        per_var[c[0] as usize] += b as i64;
    }
    let l1: i64 = per_var.iter().map(|v| v.abs()).sum();
    BigRational::new(BigInt::from(l1), BigInt::from(inst.m() as i64))
}

/// `alg-val = 1 - δ + Σ_T |Q̂(T)|·bound_T`, clipped to `[0, 1]` and rounded up.
pub fn refute_csp(inst: &CspInstance, ell: usize, cfg: &RefuteConfig) -> Result<CspRefutation> {
    let p = &inst.predicate;
    if p.is_constant_one() {
        return Err(Error::param("predicate is always true; nothing to refute"));
    }
    let t = support_threshold(p)?;
    let sep = separating_polynomial(p, t)?;
    if inst.m() == 0 {
        return Ok(CspRefutation {
            alg_val: 0.0,
            certificate: CspCertificate {
                t,
                delta: sep.delta,
                terms: Vec::new(),
                alg_val: 0.0,
            },
        });
    }
    let terms: Vec<(TermRecord, BigRational)> = sep
        .qhat
        .par_iter()
        .map(|(&set, q)| {
            let sign = if q.is_negative() { -1.0 } else { 1.0 };
            let xor = restrict_to(inst, set, sign)?;
            let positions: Vec<u32> = (0..inst.k).filter(|j| set >> j & 1 == 1).map(|j| j + 1).collect();
            if set.count_ones() == 1 {
                let exact = degree_one_max(&xor);
                Ok((
                    TermRecord {
                        set: positions,
                        coeff: q.clone(),
                        bound: ceil_f64(&exact),
                        method: TermMethod::ExactL1,
                        certificate: None,
                    },
                    exact,
                ))
            } else {
                let r = refute_poly(&xor, ell, cfg)?;
                let exact = BigRational::from_float(r.alg_val)
                    .ok_or_else(|| Error::Invariant("non-finite sub-refutation".into()))?;
                Ok((
                    TermRecord {
                        set: positions,
                        coeff: q.clone(),
                        bound: r.alg_val,
                        method: TermMethod::Refuted,
                        certificate: Some(r.certificate),
                    },
                    exact,
                ))
            }
        })
        .collect::<Result<_>>()?;
    let mut total = BigRational::one() - &sep.delta;
    for (rec, bound) in &terms {
        total += rec.coeff.abs() * bound;
    }
    let total = total.clamp(BigRational::zero(), BigRational::one());
    let alg_val = ceil_f64(&total).min(1.0);
    Ok(CspRefutation {
        alg_val,
        certificate: CspCertificate {
            t,
            delta: sep.delta,
            terms: terms.into_iter().map(|(r, _)| r).collect(),
            alg_val,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_csp, HypergraphModel};
    use crate::refute::brute_force_val;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn or2_separator() {
        let p = Predicate::or(2).unwrap();
        assert_eq!(support_threshold(&p).unwrap(), 2);
        let sep = separating_polynomial(&p, 2).unwrap();
        assert_eq!(sep.delta, q(1, 4));
        assert_eq!(sep.qhat[&0b01], q(1, 4));
        assert_eq!(sep.qhat[&0b10], q(1, 4));
        assert_eq!(sep.qhat[&0b11], q(-1, 4));
        assert_eq!(max_t_wise_mass(&p, 2).unwrap(), q(3, 4));
    }

    #[test]
    fn parity_support() {
        let p = Predicate::parity(3).unwrap();
        assert!(has_t_wise_support(&p, 2).unwrap());
        assert!(!has_t_wise_support(&p, 3).unwrap());
        let sep = separating_polynomial(&p, 3).unwrap();
        assert_eq!(sep.delta, q(1, 2));
        assert_eq!(sep.qhat.len(), 1);
        assert_eq!(sep.qhat[&0b111], q(1, 2));
        assert!(separating_polynomial(&p, 2).is_err());
    }

    #[test]
    fn or_thresholds() {
        for k in 2..=4 {
            let p = Predicate::or(k).unwrap();
            assert_eq!(support_threshold(&p).unwrap(), k);
        }
        let all = Predicate::from_fn(3, |_| true).unwrap();
        assert!(has_t_wise_support(&all, 3).unwrap());
        assert!(support_threshold(&all).is_err());
        let none = Predicate::from_fn(3, |_| false).unwrap();
        assert!(has_t_wise_support(&none, 1).is_err());
    }

    #[test]
    fn csp_soundness_small() {
        for (name, p) in Predicate::library() {
            for seed in 0..4 {
                let inst = gen_csp(p.clone(), HypergraphModel::Uniform, 8, 12, seed).unwrap();
                let r = refute_csp(&inst, 2, &RefuteConfig::default()).unwrap();
                let val = brute_force_val(&inst).unwrap();
                assert!(r.alg_val >= val, "{name} seed {seed}: {} < {val}", r.alg_val);
                assert!((0.0..=1.0).contains(&r.alg_val));
            }
        }
    }
}
