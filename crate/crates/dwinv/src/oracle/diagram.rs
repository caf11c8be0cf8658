use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub over: usize,
    pub under_in: usize,
    pub under_out: usize,
    pub sign: i8,
}

/// Planar diagram as arcs (maximal overpasses) and crossings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkDiagram {
    pub arcs: usize,
    pub crossings: Vec<Crossing>,
}

impl LinkDiagram {
    pub fn new(arcs: usize, crossings: Vec<Crossing>) -> Result<Self> {
        let d = LinkDiagram { arcs, crossings };
        d.validate()?;
        Ok(d)
    }

    pub fn unknot() -> Self {
        LinkDiagram { arcs: 1, crossings: vec![] }
    }

    fn validate(&self) -> Result<()> {
        if self.arcs == 0 {
            return Err(Error::Diagram("no arcs".into()));
        }
        let mut ins = vec![0; self.arcs];
        let mut outs = vec![0; self.arcs];
        for (k, c) in self.crossings.iter().enumerate() {
            if c.over >= self.arcs || c.under_in >= self.arcs || c.under_out >= self.arcs {
                return Err(Error::Diagram(format!("crossing {k} references a missing arc")));
            }
            if c.sign != 1 && c.sign != -1 {
                return Err(Error::Diagram(format!("crossing {k} has sign {}", c.sign)));
            }
            ins[c.under_in] += 1;
            outs[c.under_out] += 1;
        }
        for a in 0..self.arcs {
            if ins[a] > 1 || outs[a] > 1 || ins[a] != outs[a] {
                return Err(Error::Diagram(format!("arc {a} must start and end at undercrossings or at neither")));
            }
        }
        Ok(())
    }

    /// Arc that follows `a` through its terminal undercrossing, with that crossing.
    pub fn next(&self, a: usize) -> Option<(usize, usize)> {
        self.crossings.iter().position(|c| c.under_in == a).map(|k| (self.crossings[k].under_out, k))
    }

    /// Arcs grouped into components, in traversal order starting from the least arc.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.arcs];
        let mut out = Vec::new();
        for start in 0..self.arcs {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut a = start;
            while let Some((b, _)) = self.next(a) {
                if b == start {
                    break;
                }
                seen[b] = true;
                comp.push(b);
                a = b;
            }
            out.push(comp);
        }
        out
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Diagram("empty diagram".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let bad = || Error::Diagram(format!("bad header {header:?}"));
        if h.len() != 4 || h[0] != "arcs" || h[2] != "crossings" {
            return Err(bad());
        }
        let arcs: usize = h[1].parse().map_err(|_| bad())?;
        let m: usize = h[3].parse().map_err(|_| bad())?;
        let mut crossings = Vec::with_capacity(m);
        for line in lines {
            let f: Vec<i64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Diagram(format!("bad crossing line {line:?}"))))
                .collect::<Result<_>>()?;
            if f.len() != 4 || f[..3].iter().any(|&v| v < 0) {
                return Err(Error::Diagram(format!("bad crossing line {line:?}")));
            }
            crossings.push(Crossing { over: f[0] as usize, under_in: f[1] as usize, under_out: f[2] as usize, sign: f[3] as i8 });
        }
        if crossings.len() != m {
            return Err(Error::Diagram(format!("expected {m} crossings, found {}", crossings.len())));
        }
        LinkDiagram::new(arcs, crossings)
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "arcs {} crossings {}", self.arcs, self.crossings.len())?;
        for c in &self.crossings {
            writeln!(f, "{} {} {} {}", c.over, c.under_in, c.under_out, c.sign)?;
        }
        Ok(())
    }
}

/// Standard diagrams used as fixtures.
pub mod fixtures {
    use super::{Crossing, LinkDiagram};

    fn c(over: usize, under_in: usize, under_out: usize, sign: i8) -> Crossing {
        Crossing { over, under_in, under_out, sign }
    }

    pub fn trefoil() -> LinkDiagram {
        LinkDiagram::new(3, vec![c(2, 0, 1, 1), c(0, 1, 2, 1), c(1, 2, 0, 1)]).unwrap()
    }

    pub fn figure_eight() -> LinkDiagram {
        LinkDiagram::new(4, vec![c(2, 0, 1, -1), c(3, 1, 2, 1), c(0, 2, 3, -1), c(1, 3, 0, 1)]).unwrap()
    }

    pub fn hopf() -> LinkDiagram {
        LinkDiagram::new(2, vec![c(1, 0, 0, 1), c(0, 1, 1, 1)]).unwrap()
    }

    /// A one-crossing diagram of the unknot.
    pub fn kinked_unknot() -> LinkDiagram {
        LinkDiagram::new(1, vec![c(0, 0, 0, 1)]).unwrap()
    }
}
