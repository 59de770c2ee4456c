use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    Fan,
    Triangle,
}

impl WeightKind {
    pub fn tag(self) -> &'static str {
        match self {
            WeightKind::Fan => "fanweights",
            WeightKind::Triangle => "triangleweights",
        }
    }
}

/// Text form of a weight vector: a `fanweights|triangleweights k n count` header
/// followed by one value per line.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFile {
    pub kind: WeightKind,
    pub k: usize,
    pub n: usize,
    pub values: Vec<f64>,
}

impl WeightFile {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.kind.tag(), self.k, self.n, self.values.len());
        for v in &self.values {
            // 17 significant digits round-trips any f64
            let _ = writeln!(out, "{v:.16e}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::parse(hline, "expected `<kind> k n count`"));
        }
        let kind = match fields[0] {
            "fanweights" => WeightKind::Fan,
            "triangleweights" => WeightKind::Triangle,
            other => return Err(Error::parse(hline, format!("unknown weight kind `{other}`"))),
        };
        let num = |s: &str, what: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(hline, format!("bad {what} `{s}`")))
        };
        let k = num(fields[1], "k")?;
        let n = num(fields[2], "n")?;
        let count = num(fields[3], "count")?;
        let mut values = Vec::with_capacity(count.min(1 << 24));
        for (line, l) in lines {
            let v: f64 = l.parse().map_err(|_| Error::parse(line, format!("bad value `{l}`")))?;
            if !v.is_finite() {
                return Err(Error::parse(line, "non-finite value"));
            }
            values.push(v);
        }
        if values.len() != count {
            return Err(Error::parse(
                hline,
                format!("header says {count} values, found {}", values.len()),
            ));
        }
        Ok(Self { kind, k, n, values })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}
