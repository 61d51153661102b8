//! Plain-text LP dump for auditing with external solvers.
//!
//! ```text
//! sense max
//! obj 1 1
//! rows 1
//! 3 1/2 <= 4
//! bounds
//! 0 inf
//! -inf 7/3
//! int-flags 1 0
//! ```
//!
//! Rationals are exact (`p` or `p/q`). `bounds` has one `lower upper` line
//! per variable.

use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;

use super::{Constraint, LinearProgram, Relation, Sense};
use crate::error::Error;

fn join(v: &[BigRational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn bound(b: &Option<BigRational>, infinite: &str) -> String {
    b.as_ref().map_or_else(|| infinite.to_string(), ToString::to_string)
}

impl LinearProgram {
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        let sense = match self.sense {
            Sense::Minimize => "min",
            Sense::Maximize => "max",
        };
        writeln!(out, "sense {sense}").unwrap();
        writeln!(out, "obj {}", join(&self.objective)).unwrap();
        writeln!(out, "rows {}", self.constraints.len()).unwrap();
        for c in &self.constraints {
            writeln!(out, "{} {} {}", join(&c.coeffs), c.relation.symbol(), c.rhs).unwrap();
        }
        writeln!(out, "bounds").unwrap();
        for (l, u) in self.lower.iter().zip(&self.upper) {
            writeln!(out, "{} {}", bound(l, "-inf"), bound(u, "inf")).unwrap();
        }
        let flags: Vec<&str> = self.integer.iter().map(|&i| if i { "1" } else { "0" }).collect();
        writeln!(out, "int-flags {}", flags.join(" ")).unwrap();
        out
    }

    pub fn from_dump(text: &str) -> Result<Self, Error> {
        let err = |m: &str| Error::LpParse(m.to_string());
        let rat = |s: &str| BigRational::from_str(s).map_err(|_| err(&format!("bad rational {s:?}")));
        let rats = |s: &str| s.split_whitespace().map(rat).collect::<Result<Vec<_>, _>>();

        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let mut next = |what: &str| lines.next().ok_or_else(|| err(&format!("missing {what}")));

        let sense = match next("sense")?.strip_prefix("sense ") {
            Some("min") => Sense::Minimize,
            Some("max") => Sense::Maximize,
            _ => return Err(err("expected `sense min|max`")),
        };
        let objective = rats(next("obj")?.strip_prefix("obj").ok_or_else(|| err("expected `obj`"))?)?;
        let n = objective.len();
        let rows: usize = next("rows")?
            .strip_prefix("rows ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("expected `rows <count>`"))?;

        let mut lp = LinearProgram::new(sense, objective);
        for _ in 0..rows {
            let line = next("row")?;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != n + 2 {
                return Err(err(&format!("row {line:?} needs {n} coefficients, relation, rhs")));
            }
            let relation = match tokens[n] {
                "<=" => Relation::Le,
                "=" => Relation::Eq,
                ">=" => Relation::Ge,
                other => return Err(err(&format!("bad relation {other:?}"))),
            };
            let coeffs = tokens[..n].iter().map(|t| rat(t)).collect::<Result<_, _>>()?;
            lp.constraints.push(Constraint { coeffs, relation, rhs: rat(tokens[n + 1])? });
        }
        if next("bounds")? != "bounds" {
            return Err(err("expected `bounds`"));
        }
        for j in 0..n {
            let line = next("bound")?;
            let (l, u) = line.split_once(' ').ok_or_else(|| err("bound needs two values"))?;
            let lower = if l == "-inf" { None } else { Some(rat(l)?) };
            let upper = if u.trim() == "inf" { None } else { Some(rat(u.trim())?) };
            lp.set_bounds(j, lower, upper);
        }
        let flags = next("int-flags")?.strip_prefix("int-flags").ok_or_else(|| err("expected `int-flags`"))?;
        let flags: Vec<bool> = flags
            .split_whitespace()
            .map(|f| match f {
                "1" => Ok(true),
                "0" => Ok(false),
                _ => Err(err("int-flags are 0 or 1")),
            })
            .collect::<Result<_, _>>()?;
        if flags.len() != n {
            return Err(err("int-flags length"));
        }
        lp.integer = flags;
        lp.validate()?;
        Ok(lp)
    }
}
