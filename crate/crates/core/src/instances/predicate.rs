use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A Boolean predicate `P: {±1}^k → {0,1}` with its exact Fourier expansion.
///
/// Points are indexed by bitmask: bit `i` set means `z_i = -1`. Sets
/// `S ⊆ [k]` are bitmasks as well, so `fourier[S]` is `P̂(S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    k: u32,
    truth: Vec<bool>,
    fourier: Vec<Rational64>,
}

pub(crate) const MAX_ARITY: u32 = 16;

impl Predicate {
    pub fn from_truth_table(k: u32, truth: Vec<bool>) -> Result<Self> {
        if k == 0 || k > MAX_ARITY {
            return Err(Error::param(format!("predicate arity {k} outside 1..={MAX_ARITY}")));
        }
        if truth.len() != 1usize << k {
            return Err(Error::param(format!(
                "truth table has {} entries, expected 2^{k}",
                truth.len()
            )));
        }
        let fourier = fourier_transform(k, &truth);
        Ok(Predicate { k, truth, fourier })
    }

    pub fn from_fn(k: u32, f: impl Fn(&[i8]) -> bool) -> Result<Self> {
        let mut z = vec![0i8; k as usize];
        let truth = (0..1usize << k)
            .map(|mask| {
                point(k, mask, &mut z);
                f(&z)
            })
            .collect();
        Self::from_truth_table(k, truth)
    }

    /// Parse the `2^k`-character bit string format; whitespace is ignored.
    pub fn parse_truth_table(text: &str) -> Result<Self> {
        let bits: Vec<bool> = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::param(format!("invalid truth-table character {other:?}"))),
            })
            .collect::<Result<_>>()?;
        if bits.len() < 2 || !bits.len().is_power_of_two() {
            return Err(Error::param(format!(
                "truth table length {} is not a power of two >= 2",
                bits.len()
            )));
        }
        Self::from_truth_table(bits.len().trailing_zeros(), bits)
    }

    pub fn truth_table_string(&self) -> String {
        self.truth.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// `OR_k`: false only when every literal is `-1`.
    pub fn or(k: u32) -> Result<Self> {
        Self::from_fn(k, |z| z.contains(&1))
    }

    /// Even parity: true iff `Π z_i = 1`.
    pub fn parity(k: u32) -> Result<Self> {
        Self::from_fn(k, |z| z.iter().product::<i8>() == 1)
    }

    /// Not-all-equal.
    pub fn nae(k: u32) -> Result<Self> {
        Self::from_fn(k, |z| z.iter().any(|&v| v != z[0]))
    }

    /// Hadamard predicate on `2^q - 1` positions indexed by nonzero `a ∈ F_2^q`:
    /// true iff `z_a = Π_{i ∈ a} w_i` for some `w ∈ {±1}^q`.
    pub fn hadamard(q: u32) -> Result<Self> {
        if !(2..=4).contains(&q) {
            return Err(Error::param("hadamard predicate needs 2 <= q <= 4"));
        }
        let k = (1u32 << q) - 1;
        let codewords: Vec<Vec<i8>> = (0..1u32 << q)
            .map(|w| {
                (1..=k)
                    .map(|a| if (a & w).count_ones() % 2 == 0 { 1 } else { -1 })
                    .collect()
            })
            .collect();
        Self::from_fn(k, |z| codewords.iter().any(|c| c.as_slice() == z))
    }

    /// Look up a builtin by name: `or3`, `parity4`, `nae3`, `hadamard2`, ...
    pub fn builtin(name: &str) -> Result<Self> {
        let split = name
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| Error::param(format!("unknown predicate {name:?}")))?;
        let (family, num) = name.split_at(split);
        let num: u32 = num
            .parse()
            .map_err(|_| Error::param(format!("unknown predicate {name:?}")))?;
        match family.to_ascii_lowercase().trim_end_matches('_') {
            "or" | "sat" => Self::or(num),
            "parity" | "xor" => Self::parity(num),
            "nae" => Self::nae(num),
            "hadamard" => Self::hadamard(num),
            _ => Err(Error::param(format!("unknown predicate {name:?}"))),
        }
    }

    pub fn library() -> Vec<(String, Predicate)> {
        let mut out = Vec::new();
        for k in 2..=4 {
            out.push((format!("or{k}"), Self::or(k).unwrap()));
            out.push((format!("parity{k}"), Self::parity(k).unwrap()));
        }
        for k in 3..=4 {
            out.push((format!("nae{k}"), Self::nae(k).unwrap()));
        }
        out.push(("hadamard2".to_string(), Self::hadamard(2).unwrap()));
        out
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn truth(&self) -> &[bool] {
        &self.truth
    }

    pub fn value_at(&self, mask: usize) -> bool {
        self.truth[mask]
    }

    pub fn eval_signs(&self, z: impl IntoIterator<Item = i8>) -> bool {
        let mask = z
            .into_iter()
            .enumerate()
            .fold(0usize, |acc, (i, v)| if v < 0 { acc | (1 << i) } else { acc });
        self.truth[mask]
    }

    /// Exact Fourier coefficients indexed by subset bitmask.
    pub fn fourier(&self) -> &[Rational64] {
        &self.fourier
    }

    pub fn is_constant_one(&self) -> bool {
        self.truth.iter().all(|&b| b)
    }

    pub fn is_constant_zero(&self) -> bool {
        self.truth.iter().all(|&b| !b)
    }

    /// Evaluate the Fourier expansion at a point and compare with the table.
    pub fn fourier_is_exact(&self) -> bool {
        (0..self.truth.len()).all(|mask| {
            let v: Rational64 = (0..self.fourier.len())
                .map(|s| {
                    if (s & mask).count_ones() % 2 == 0 {
                        self.fourier[s]
                    } else {
                        -self.fourier[s]
                    }
                })
                .sum();
            v == Rational64::from_integer(self.truth[mask] as i64)
        })
    }
}

/// Writes the signs of point `mask` into `z`.
pub(crate) fn point(k: u32, mask: usize, z: &mut [i8]) {
    for (i, zi) in z.iter_mut().enumerate().take(k as usize) {
        *zi = if mask >> i & 1 == 1 { -1 } else { 1 };
    }
}

/// `χ_S(z)` for subset mask `s` at point mask `z`.
#[inline]
pub(crate) fn character(s: usize, z: usize) -> i64 {
    if (s & z).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn fourier_transform(k: u32, truth: &[bool]) -> Vec<Rational64> {
    let size = 1usize << k;
    (0..size)
        .map(|s| {
            let sum: i64 = (0..size)
                .filter(|&z| truth[z])
                .map(|z| character(s, z))
                .sum();
            Rational64::new(sum, size as i64)
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct FourierTerm {
    set: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PredicateRepr {
    k: u32,
    truth_table: String,
    #[serde(default)]
    fourier: Option<Vec<FourierTerm>>,
}

impl Serialize for Predicate {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let fourier = self
            .fourier
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| FourierTerm {
                set: (0..self.k).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect(),
                coeff: c.to_string(),
            })
            .collect();
        PredicateRepr {
            k: self.k,
            truth_table: self.truth_table_string(),
            fourier: Some(fourier),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Predicate {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PredicateRepr::deserialize(de)?;
        let p = Predicate::parse_truth_table(&repr.truth_table).map_err(D::Error::custom)?;
        if p.k != repr.k {
            return Err(D::Error::custom("predicate arity disagrees with truth table"));
        }
        if let Some(terms) = repr.fourier {
            let mut given = vec![Rational64::zero(); p.fourier.len()];
            for t in terms {
                let mask = t.set.iter().try_fold(0usize, |acc, &i| {
                    if i == 0 || i > p.k {
                        Err(D::Error::custom("fourier set index out of range"))
                    } else {
                        Ok(acc | 1 << (i - 1))
                    }
                })?;
                given[mask] = t
                    .coeff
                    .parse::<Rational64>()
                    .map_err(|_| D::Error::custom("bad fourier coefficient"))?;
            }
            if given != p.fourier {
                return Err(D::Error::custom("fourier expansion disagrees with truth table"));
            }
        }
        Ok(p)
    }
}

impl Predicate {
    /// `P̂(∅) + |P̂([k])|`, which never exceeds one.
    pub fn constant_plus_top(&self) -> Rational64 {
        self.fourier[0] + self.fourier[self.fourier.len() - 1].abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn or2_fourier() {
        let p = Predicate::or(2).unwrap();
        assert_eq!(p.fourier(), &[r(3, 4), r(1, 4), r(1, 4), r(-1, 4)]);
        assert!(p.fourier_is_exact());
    }

    #[test]
    fn or3_fourier() {
        let p = Predicate::or(3).unwrap();
        let f = p.fourier();
        assert_eq!(f[0], r(7, 8));
        for s in [0b001, 0b010, 0b100] {
            assert_eq!(f[s], r(1, 8));
        }
        for s in [0b011, 0b101, 0b110] {
            assert_eq!(f[s], r(-1, 8));
        }
        assert_eq!(f[0b111], r(1, 8));
    }

    #[test]
    fn constant_plus_top_at_most_one() {
        for (_, p) in Predicate::library() {
            assert!(p.fourier_is_exact());
            assert!(p.constant_plus_top() <= r(1, 1));
        }
        for t in 0u32..256 {
            let p = Predicate::from_truth_table(3, (0..8).map(|i| t >> i & 1 == 1).collect()).unwrap();
            assert!(p.fourier_is_exact());
            assert!(p.constant_plus_top() <= r(1, 1));
        }
    }

    #[test]
    fn truth_table_text_roundtrip() {
        let p = Predicate::parse_truth_table("0111 1111").unwrap();
        assert_eq!(p.k(), 3);
        assert_eq!(p.truth_table_string(), "01111111");
        assert!(Predicate::parse_truth_table("011").is_err());
        assert!(Predicate::parse_truth_table("01x1").is_err());
    }

    #[test]
    fn hadamard2_is_parity() {
        assert_eq!(
            Predicate::hadamard(2).unwrap().truth(),
            Predicate::parity(3).unwrap().truth()
        );
    }

    #[test]
    fn json_rejects_inconsistent_fourier() {
        let p = Predicate::or(2).unwrap();
        let mut v = serde_json::to_value(&p).unwrap();
        assert_eq!(serde_json::from_value::<Predicate>(v.clone()).unwrap(), p);
        v["fourier"][0]["coeff"] = serde_json::json!("1/2");
        assert!(serde_json::from_value::<Predicate>(v).is_err());
    }
}
