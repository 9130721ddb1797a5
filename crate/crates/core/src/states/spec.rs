use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::tensor::{DensityMatrix, PureState, SystemShape};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Ghz,
    Dicke,
    W,
    BisepExample,
    RhoC,
    GhzPair,
}

impl StateKind {
    fn keyword(self) -> &'static str {
        match self {
            StateKind::Ghz => "ghz",
            StateKind::Dicke => "dicke",
            StateKind::W => "w",
            StateKind::BisepExample => "bisep",
            StateKind::RhoC => "rhoc",
            StateKind::GhzPair => "ghzpair",
        }
    }
}

/// A named state with its parameters, e.g. `ghz:n=3,d=3,f=3`,
/// `dicke:n=4,d=3,m=2,f=3`, `w:n=3,d=3`, `rhoc`, `bisep`,
/// `ghzpair:i=0,j=2`.
///
/// `f` defaults to `d` and `m` to 1. `rhoc` is fixed to `n=3, d=3`;
/// `bisep` and `ghzpair` default to that shape too.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedStateSpec {
    pub kind: StateKind,
    pub shape: SystemShape,
    pub f: Option<usize>,
    pub m: Option<usize>,
    pub pair: Option<(usize, usize)>,
}

/// A constructed named state.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl NamedState {
    pub fn shape(&self) -> SystemShape {
        match self {
            NamedState::Pure(p) => p.shape(),
            NamedState::Mixed(r) => r.shape(),
        }
    }
}

impl NamedStateSpec {
    /// Effective `f` (defaults to `d`).
    pub fn f(&self) -> usize {
        self.f.unwrap_or(self.shape.d())
    }

    /// Effective `m` (defaults to 1).
    pub fn m(&self) -> usize {
        self.m.unwrap_or(1)
    }

    fn validate(&self) -> Result<()> {
        let (n, d) = (self.shape.n(), self.shape.d());
        let f = self.f();
        let needs_f = matches!(self.kind, StateKind::Ghz | StateKind::Dicke | StateKind::W);
        if !needs_f && self.f.is_some() {
            return Err(Error::Parameter(format!("{} takes no f", self.kind.keyword())));
        }
        if needs_f && (f < 2 || f > d) {
            return Err(Error::Parameter(format!("f={f} outside 2..={d}")));
        }
        match self.kind {
            StateKind::Dicke => {
                let m = self.m();
                if m < 1 || m > n / 2 {
                    return Err(Error::Parameter(format!("m={m} outside 1..={}", n / 2)));
                }
            }
            _ if self.m.is_some() => {
                return Err(Error::Parameter(format!("{} takes no m", self.kind.keyword())));
            }
            _ => {}
        }
        match (self.kind, self.pair) {
            (StateKind::GhzPair, None) => {
                return Err(Error::Parameter("ghzpair needs i and j".into()));
            }
            (StateKind::GhzPair, Some((i, j))) if i == j || i >= d || j >= d => {
                return Err(Error::Parameter(format!("invalid pair ({i}, {j}) for d={d}")));
            }
            (StateKind::GhzPair, _) => {}
            (_, Some(_)) => {
                return Err(Error::Parameter(format!("{} takes no i, j", self.kind.keyword())));
            }
            _ => {}
        }
        match self.kind {
            StateKind::RhoC if (n, d) != (3, 3) => {
                Err(Error::Parameter("rhoc is defined for n=3, d=3 only".into()))
            }
            StateKind::BisepExample if n != 3 || d < 3 => {
                Err(Error::Parameter("bisep needs n=3 and d>=3".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self) -> Result<NamedState> {
        self.validate()?;
        let s = self.shape;
        Ok(match self.kind {
            StateKind::Ghz => NamedState::Pure(super::ghz(s, self.f())?),
            StateKind::Dicke => NamedState::Pure(super::dicke(s, self.m(), self.f())?),
            StateKind::W => NamedState::Pure(super::w_state(s, self.f())?),
            StateKind::BisepExample => NamedState::Pure(super::bisep_example(s)?),
            StateKind::RhoC => NamedState::Mixed(super::rho_c(s)?),
            StateKind::GhzPair => {
                let (i, j) = self.pair.expect("validated");
                NamedState::Pure(super::ghz_pair(s, i, j)?)
            }
        })
    }

    /// Builds the state and fails unless it is pure.
    pub fn build_pure(&self) -> Result<PureState> {
        match self.build()? {
            NamedState::Pure(p) => Ok(p),
            NamedState::Mixed(_) => Err(Error::Unsupported(format!(
                "{} is a mixed state",
                self.kind.keyword()
            ))),
        }
    }
}

impl FromStr for NamedStateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h.trim(), Some(t)),
            None => (s, None),
        };
        let kind = match head.to_ascii_lowercase().as_str() {
            "ghz" => StateKind::Ghz,
            "dicke" => StateKind::Dicke,
            "w" => StateKind::W,
            "bisep" => StateKind::BisepExample,
            "rhoc" => StateKind::RhoC,
            "ghzpair" => StateKind::GhzPair,
            other => {
                return Err(Error::Parameter(format!("unknown state kind '{other}'")));
            }
        };
        let (mut n, mut d, mut f, mut m, mut i, mut j) = (None, None, None, None, None, None);
        for item in tail.into_iter().flat_map(|t| t.split(',')).map(str::trim) {
            if item.is_empty() {
                continue;
            }
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("expected key=value, got '{item}'")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("'{value}' is not a nonnegative integer")))?;
            let slot = match key.trim() {
                "n" => &mut n,
                "d" => &mut d,
                "f" => &mut f,
                "m" => &mut m,
                "i" => &mut i,
                "j" => &mut j,
                other => return Err(Error::Parameter(format!("unknown parameter '{other}'"))),
            };
            if slot.replace(value).is_some() {
                return Err(Error::Parameter(format!("duplicate parameter '{}'", key.trim())));
            }
        }
        let (n, d) = match kind {
            StateKind::Ghz | StateKind::Dicke | StateKind::W => (
                n.ok_or_else(|| Error::Parameter(format!("{head} needs n")))?,
                d.ok_or_else(|| Error::Parameter(format!("{head} needs d")))?,
            ),
            _ => (n.unwrap_or(3), d.unwrap_or(3)),
        };
        let pair = match (i, j) {
            (Some(i), Some(j)) => Some((i, j)),
            (None, None) => None,
            _ => return Err(Error::Parameter("i and j must be given together".into())),
        };
        let spec = NamedStateSpec {
            kind,
            shape: SystemShape::new(n, d)?,
            f,
            m,
            pair,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for NamedStateSpec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: alloc::vec::Vec<String> = alloc::vec![
            format!("n={}", self.shape.n()),
            format!("d={}", self.shape.d()),
        ];
        if let Some(m) = self.m {
            parts.push(format!("m={m}"));
        }
        if let Some(f) = self.f {
            parts.push(format!("f={f}"));
        }
        if let Some((i, j)) = self.pair {
            parts.push(format!("i={i}"));
            parts.push(format!("j={j}"));
        }
        write!(out, "{}:{}", self.kind.keyword(), parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_grammar() {
        let g: NamedStateSpec = "ghz:n=3,d=3,f=3".parse().unwrap();
        assert_eq!(g.kind, StateKind::Ghz);
        assert_eq!(g.f(), 3);
        let dk: NamedStateSpec = "dicke:n=4,d=3,m=2,f=3".parse().unwrap();
        assert_eq!((dk.m(), dk.f()), (2, 3));
        let w: NamedStateSpec = "w:n=3,d=3".parse().unwrap();
        assert_eq!((w.m(), w.f()), (1, 3));
        let r: NamedStateSpec = "rhoc".parse().unwrap();
        assert_eq!(r.shape, SystemShape::new(3, 3).unwrap());
        assert!(matches!(r.build().unwrap(), NamedState::Mixed(_)));
        let b: NamedStateSpec = "bisep".parse().unwrap();
        assert!(matches!(b.build().unwrap(), NamedState::Pure(_)));
        let p: NamedStateSpec = "ghzpair:i=0,j=2".parse().unwrap();
        assert_eq!(p.pair, Some((0, 2)));
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            "ghz:n=3",
            "ghz:n=3,d=3,f=4",
            "dicke:n=4,d=3,m=3",
            "w:n=3,d=3,m=2",
            "rhoc:d=4",
            "bisep:d=2",
            "ghzpair:i=1",
            "ghzpair:i=1,j=1",
            "tensor:n=3,d=3",
            "ghz:n=3,d=3,x=1",
            "ghz:n=3,n=4,d=3",
            "ghz:n=three,d=3",
        ] {
            assert!(bad.parse::<NamedStateSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["ghz:n=3,d=3,f=2", "dicke:n=4,d=3,m=2,f=3", "w:n=5,d=2", "rhoc", "ghzpair:i=1,j=2"] {
            let spec: NamedStateSpec = s.parse().unwrap();
            let again: NamedStateSpec = spec.to_string().parse().unwrap();
            assert_eq!(spec, again);
        }
    }

    #[test]
    fn build_pure_rejects_rhoc() {
        let r: NamedStateSpec = "rhoc".parse().unwrap();
        assert!(matches!(r.build_pure(), Err(Error::Unsupported(_))));
    }
}
