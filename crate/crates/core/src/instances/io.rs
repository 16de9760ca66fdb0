use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{check_clause, CspInstance, Instance, Predicate, XorInstance};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Xor,
    DimacsCnf,
    Json,
}

impl Format {
    /// Guess from the file extension: `.xor`, `.cnf`, `.json`.
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()? {
            "xor" => Some(Format::Xor),
            "cnf" | "dimacs" => Some(Format::DimacsCnf),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xor" => Ok(Format::Xor),
            "dimacs-cnf" | "cnf" | "dimacs" => Ok(Format::DimacsCnf),
            "json" => Ok(Format::Json),
            other => Err(Error::param(format!("unknown format {other:?}"))),
        }
    }
}

/// Read an instance; `format` defaults to the one implied by the extension.
pub fn read_instance(path: &Path, format: Option<Format>) -> Result<Instance> {
    let format = format
        .or_else(|| Format::from_path(path))
        .ok_or_else(|| Error::param(format!("cannot infer format of {}", path.display())))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_instance_str(&text, format).map_err(|e| match e {
        Error::Parse { line, message, .. } => Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        },
        other => other,
    })
}

pub fn read_instance_str(text: &str, format: Format) -> Result<Instance> {
    match format {
        Format::Xor => parse_xor(text).map(Instance::Xor),
        Format::DimacsCnf => parse_dimacs(text).map(Instance::Csp),
        Format::Json => {
            let repr: InstanceRepr = serde_json::from_str(text).map_err(|e| Error::Parse {
                path: Default::default(),
                line: e.line(),
                message: e.to_string(),
            })?;
            repr.into_instance()
        }
    }
}

pub fn write_instance(inst: &Instance, path: &Path, format: Format) -> Result<()> {
    let text = write_instance_string(inst, format)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_instance_string(inst: &Instance, format: Format) -> Result<String> {
    match (format, inst) {
        (Format::Xor, Instance::Xor(x)) => Ok(write_xor(x)),
        (Format::DimacsCnf, Instance::Csp(c)) => write_dimacs(c),
        (Format::Json, inst) => {
            let mut s = serde_json::to_string_pretty(&InstanceRepr::from_instance(inst))?;
            s.push('\n');
            Ok(s)
        }
        (Format::Xor, Instance::Csp(_)) => {
            Err(Error::Unsupported("the xor format holds XOR instances only".into()))
        }
        (Format::DimacsCnf, Instance::Xor(_)) => {
            Err(Error::Unsupported("the dimacs-cnf format holds OR constraints only".into()))
        }
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: Default::default(),
        line,
        message: message.into(),
    }
}

/// Non-comment, non-blank lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'))
}

fn parse_num<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| perr(line, format!("invalid {what} {tok:?}")))
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    kind: &str,
    fields: usize,
) -> Result<(usize, Vec<u64>)> {
    let (line, text) = lines
        .next()
        .ok_or_else(|| perr(1, format!("missing \"p {kind}\" header")))?;
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != 2 + fields || toks[0] != "p" || toks[1] != kind {
        return Err(perr(line, format!("expected header \"p {kind}\" with {fields} numbers")));
    }
    let nums = toks[2..]
        .iter()
        .map(|t| parse_num(t, line, "header field"))
        .collect::<Result<_>>()?;
    Ok((line, nums))
}

fn parse_var(tok: &str, n: u32, line: usize) -> Result<u32> {
    let v: u32 = parse_num(tok, line, "variable")?;
    if v == 0 || v > n {
        return Err(perr(line, format!("variable {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

fn parse_xor(text: &str) -> Result<XorInstance> {
    let mut lines = content_lines(text);
    let (hline, h) = parse_header(&mut lines, "xor", 3)?;
    let (n, m, k) = (h[0] as u32, h[1] as usize, h[2] as u32);
    if k == 0 {
        return Err(perr(hline, "arity must be positive"));
    }
    let mut clauses = Vec::with_capacity(m);
    let mut coeffs = Vec::with_capacity(m);
    for (line, text) in lines {
        let mut toks = text.split_whitespace();
        let b: f64 = parse_num(toks.next().unwrap_or(""), line, "coefficient")?;
        if !b.is_finite() || b.abs() > 1.0 {
            return Err(perr(line, format!("coefficient {b} outside [-1, 1]")));
        }
        let mut c = toks.map(|t| parse_var(t, n, line)).collect::<Result<Vec<_>>>()?;
        c.sort_unstable();
        check_clause(&c, n, k as usize).map_err(|e| perr(line, e))?;
        clauses.push(c);
        coeffs.push(b);
    }
    if clauses.len() != m {
        return Err(perr(hline, format!("header declares {m} clauses, found {}", clauses.len())));
    }
    XorInstance::new(n, k, clauses, coeffs)
}

fn format_coeff(b: f64) -> String {
    if b == 1.0 {
        "+1".to_string()
    } else if b == -1.0 {
        "-1".to_string()
    } else {
        format!("{b}")
    }
}

fn write_xor(inst: &XorInstance) -> String {
    let mut out = format!("p xor {} {} {}\n", inst.n, inst.m(), inst.k);
    for (c, &b) in inst.clauses.iter().zip(&inst.coeffs) {
        out.push_str(&format_coeff(b));
        for v in c {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    out
}

fn parse_dimacs(text: &str) -> Result<CspInstance> {
    let mut lines = content_lines(text);
    let (hline, h) = parse_header(&mut lines, "cnf", 2)?;
    let (n, m) = (h[0] as u32, h[1] as usize);
    let mut scopes = Vec::with_capacity(m);
    let mut literals = Vec::with_capacity(m);
    let mut k = None;
    let mut pending: Vec<i64> = Vec::new();
    for (line, text) in lines {
        for tok in text.split_whitespace() {
            let lit: i64 = parse_num(tok, line, "literal")?;
            if lit != 0 {
                pending.push(lit);
                continue;
            }
            let width = pending.len();
            if *k.get_or_insert(width) != width {
                return Err(perr(line, format!("clause has {width} literals, expected {}", k.unwrap())));
            }
            let scope: Vec<u32> = pending
                .iter()
                .map(|l| parse_var(&l.unsigned_abs().to_string(), n, line))
                .collect::<Result<_>>()?;
            let mut sorted = scope.clone();
            sorted.sort_unstable();
            check_clause(&sorted, n, width).map_err(|e| perr(line, e))?;
            literals.push(pending.iter().map(|&l| if l > 0 { 1 } else { -1 }).collect());
            scopes.push(scope);
            pending.clear();
        }
    }
    if !pending.is_empty() {
        return Err(perr(text.lines().count(), "last clause is not terminated by 0"));
    }
    if scopes.len() != m {
        return Err(perr(hline, format!("header declares {m} clauses, found {}", scopes.len())));
    }
    let k = k.unwrap_or(1).max(1) as u32;
    let predicate = Predicate::or(k).map_err(|e| perr(hline, e.to_string()))?;
    CspInstance::new(n, predicate, scopes, literals)
}

fn write_dimacs(inst: &CspInstance) -> Result<String> {
    if inst.predicate != Predicate::or(inst.k)? {
        return Err(Error::Unsupported("dimacs-cnf output needs an OR predicate".into()));
    }
    let mut out = format!("p cnf {} {}\n", inst.n, inst.m());
    for (scope, lits) in inst.scopes.iter().zip(&inst.literals) {
        for (&v, &l) in scope.iter().zip(lits) {
            let _ = write!(out, "{} ", i64::from(l) * i64::from(v + 1));
        }
        out.push_str("0\n");
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum InstanceRepr {
    Xor {
        n: u32,
        k: u32,
        m: usize,
        clauses: Vec<Vec<u32>>,
        coeffs: Vec<f64>,
    },
    Csp {
        n: u32,
        k: u32,
        m: usize,
        predicate: Predicate,
        scopes: Vec<Vec<u32>>,
        literals: Vec<Vec<i8>>,
    },
}

fn one_based(sets: &[Vec<u32>]) -> Vec<Vec<u32>> {
    sets.iter().map(|c| c.iter().map(|v| v + 1).collect()).collect()
}

fn zero_based(sets: Vec<Vec<u32>>) -> Result<Vec<Vec<u32>>> {
    sets.into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.into_iter()
                .map(|v| {
                    v.checked_sub(1)
                        .ok_or_else(|| Error::param(format!("entry {i} uses variable 0; variables are 1-based")))
                })
                .collect()
        })
        .collect()
}

impl InstanceRepr {
    fn from_instance(inst: &Instance) -> Self {
        match inst {
            Instance::Xor(x) => InstanceRepr::Xor {
                n: x.n,
                k: x.k,
                m: x.m(),
                clauses: one_based(&x.clauses),
                coeffs: x.coeffs.clone(),
            },
            Instance::Csp(c) => InstanceRepr::Csp {
                n: c.n,
                k: c.k,
                m: c.m(),
                predicate: c.predicate.clone(),
                scopes: one_based(&c.scopes),
                literals: c.literals.clone(),
            },
        }
    }

    fn into_instance(self) -> Result<Instance> {
        match self {
            InstanceRepr::Xor { n, k, m, clauses, coeffs } => {
                if clauses.len() != m {
                    return Err(Error::param("json: m disagrees with clause count"));
                }
                XorInstance::new(n, k, zero_based(clauses)?, coeffs).map(Instance::Xor)
            }
            InstanceRepr::Csp { n, k, m, predicate, scopes, literals } => {
                if scopes.len() != m || predicate.k() != k {
                    return Err(Error::param("json: m or k disagrees with the data"));
                }
                CspInstance::new(n, predicate, zero_based(scopes)?, literals).map(Instance::Csp)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_csp, gen_random_xor, HypergraphModel};

    #[test]
    fn xor_example() {
        let inst = read_instance_str("p xor 4 1 3\n+1 1 2 3\n", Format::Xor)
            .unwrap()
            .into_xor()
            .unwrap();
        assert_eq!((inst.n, inst.k, inst.m()), (4, 3, 1));
        assert_eq!(inst.clauses[0], vec![0, 1, 2]);
        assert_eq!(inst.coeffs[0], 1.0);
        assert_eq!(
            write_instance_string(&Instance::Xor(inst), Format::Xor).unwrap(),
            "p xor 4 1 3\n+1 1 2 3\n"
        );
    }

    #[test]
    fn empty_xor_is_header_only() {
        let inst = XorInstance::new(5, 3, vec![], vec![]).unwrap();
        assert_eq!(write_instance_string(&Instance::Xor(inst), Format::Xor).unwrap(), "p xor 5 0 3\n");
    }

    #[test]
    fn dimacs_example() {
        let inst = read_instance_str("p cnf 3 1\n1 -2 3 0\n", Format::DimacsCnf)
            .unwrap()
            .into_csp()
            .unwrap();
        assert_eq!(inst.predicate, Predicate::or(3).unwrap());
        assert_eq!(inst.scopes[0], vec![0, 1, 2]);
        assert_eq!(inst.literals[0], vec![1, -1, 1]);
        assert_eq!(
            write_instance_string(&Instance::Csp(inst), Format::DimacsCnf).unwrap(),
            "p cnf 3 1\n1 -2 3 0\n"
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("p xor 4 1 3\n+1 1 2 2\n", 2),
            ("p xor 4 1 3\nc note\n+1 1 2 5\n", 3),
            ("p xor 4 1 3\n+1 1 2\n", 2),
            ("p xor 4 2 3\n+1 1 2 3\n", 1),
            ("p cnf 3 2\n1 2 0\n1 2 3 0\n", 3),
        ];
        for (text, want) in cases {
            let fmt = if text.contains("cnf") { Format::DimacsCnf } else { Format::Xor };
            match read_instance_str(text, fmt) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn roundtrip_random_instances() {
        for seed in 0..100 {
            let inst = Instance::Xor(gen_random_xor(12, 3, 20, seed).unwrap());
            for fmt in [Format::Xor, Format::Json] {
                let text = write_instance_string(&inst, fmt).unwrap();
                let back = read_instance_str(&text, fmt).unwrap();
                assert_eq!(back, inst);
                assert_eq!(write_instance_string(&back, fmt).unwrap(), text);
            }
        }
        let csp = Instance::Csp(
            gen_csp(Predicate::or(3).unwrap(), HypergraphModel::Uniform, 10, 15, 1).unwrap(),
        );
        for fmt in [Format::DimacsCnf, Format::Json] {
            let text = write_instance_string(&csp, fmt).unwrap();
            assert_eq!(read_instance_str(&text, fmt).unwrap(), csp);
        }
    }

    #[test]
    fn fractional_coefficients_roundtrip() {
        let inst = Instance::Xor(XorInstance::new(4, 2, vec![vec![0, 1]], vec![0.1]).unwrap());
        let text = write_instance_string(&inst, Format::Xor).unwrap();
        assert_eq!(text, "p xor 4 1 2\n0.1 1 2\n");
        assert_eq!(read_instance_str(&text, Format::Xor).unwrap(), inst);
    }
}
