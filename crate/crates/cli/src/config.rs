//! Sectioned key = value configuration: the grammar is `[section]` headers,
//! scalar `key = value` lines, `#` comments, no nesting. Unknown keys and
//! sections are rejected with their line number; all ranges are validated
//! here so the runner can assume a sane RunConfig.

use std::fmt;

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "config line {}: {}", self.line, self.message)
        } else {
            write!(f, "config: {}", self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    CheckGeometry,
    VerifyC1a,
    VerifyC0a,
    SecondDiff,
    Schauder,
    Smoothing,
    Sweep,
}

impl Command {
    fn parse(s: &str, line: usize) -> Result<Self, ConfigError> {
        Ok(match s {
            "solve" => Command::Solve,
            "check-geometry" => Command::CheckGeometry,
            "verify-c1a" => Command::VerifyC1a,
            "verify-c0a" => Command::VerifyC0a,
            "second-diff" => Command::SecondDiff,
            "schauder" => Command::Schauder,
            "smoothing" => Command::Smoothing,
            "sweep" => Command::Sweep,
            other => return Err(err(line, format!("unknown command \"{other}\""))),
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::CheckGeometry => "check-geometry",
            Command::VerifyC1a => "verify-c1a",
            Command::VerifyC0a => "verify-c0a",
            Command::SecondDiff => "second-diff",
            Command::Schauder => "schauder",
            Command::Smoothing => "smoothing",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    Disc,
    Radial,
    Toric,
}

/// A φ or f^{1/n} preset with its parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    Zero,
    Const(f64),
    /// c · Re z₁.
    Linear(f64),
    /// |z|².
    Quad,
    /// |Re z₁|^{1+a}.
    Abspow(f64),
    /// |z|^b.
    Radialpow(f64),
    /// |z₁|².
    ToricSlice,
}

impl Preset {
    fn parse(s: &str, line: usize, key: &str) -> Result<Self, ConfigError> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let num = |line: usize| -> Result<f64, ConfigError> {
            arg.ok_or_else(|| err(line, format!("preset \"{name}\" needs a :parameter")))?
                .parse()
                .map_err(|_| err(line, format!("bad numeric parameter in \"{s}\"")))
        };
        let bare = |p: Preset| {
            if arg.is_some() {
                Err(err(line, format!("preset \"{name}\" takes no parameter")))
            } else {
                Ok(p)
            }
        };
        match name {
            "zero" => bare(Preset::Zero),
            "quad" => bare(Preset::Quad),
            "toric-slice" => bare(Preset::ToricSlice),
            "const" => Ok(Preset::Const(num(line)?)),
            "linear" => Ok(Preset::Linear(num(line)?)),
            "abspow" => {
                let a = num(line)?;
                if !(a > 0.0 && a < 1.0) {
                    return Err(err(line, format!("abspow exponent {a} out of (0, 1)")));
                }
                Ok(Preset::Abspow(a))
            }
            "radialpow" => {
                let b = num(line)?;
                if b < 0.0 {
                    return Err(err(line, format!("radialpow exponent {b} must be >= 0")));
                }
                Ok(Preset::Radialpow(b))
            }
            other => Err(err(
                line,
                format!("unknown preset \"{other}\" for key \"{key}\""),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub n: usize,
    pub r: f64,
    pub symmetry: SymmetryKind,
    pub phi: Preset,
    /// Preset for the density root f^{1/n} (specified via its root so
    /// admissibility f ≥ 0 is structural).
    pub f_root: Preset,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub instance: InstanceSpec,
    pub alpha: f64,
    pub t: f64,
    pub resolution: usize,
    pub seed: u64,
    pub out: Option<String>,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    #[derive(Default)]
    struct Raw {
        command: Option<(Command, usize)>,
        alpha: Option<f64>,
        t: Option<f64>,
        resolution: Option<usize>,
        seed: Option<u64>,
        out: Option<String>,
        n: Option<usize>,
        r: Option<f64>,
        symmetry: Option<SymmetryKind>,
        phi: Option<Preset>,
        f_root: Option<Preset>,
    }
    let mut raw = Raw::default();
    let mut section = String::new();

    for (idx, line_text) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = line_text.split('#').next().unwrap_or("").trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line, "unterminated section header"))?
                .trim();
            match name {
                "run" | "instance" => section = name.to_string(),
                other => return Err(err(line, format!("unknown section \"{other}\""))),
            }
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| err(line, "expected key = value"))?;
        let (key, value) = (key.trim(), value.trim());
        let fnum = |what: &str| -> Result<f64, ConfigError> {
            value
                .parse()
                .map_err(|_| err(line, format!("bad number for \"{what}\": \"{value}\"")))
        };
        let unum = |what: &str| -> Result<u64, ConfigError> {
            value
                .parse()
                .map_err(|_| err(line, format!("bad integer for \"{what}\": \"{value}\"")))
        };
        match (section.as_str(), key) {
            ("run", "command") => raw.command = Some((Command::parse(value, line)?, line)),
            ("run", "alpha") => raw.alpha = Some(fnum("alpha")?),
            ("run", "t") => raw.t = Some(fnum("t")?),
            ("run", "resolution") => raw.resolution = Some(unum("resolution")? as usize),
            ("run", "seed") => raw.seed = Some(unum("seed")?),
            ("run", "out") => raw.out = Some(value.to_string()),
            ("instance", "n") => raw.n = Some(unum("n")? as usize),
            ("instance", "r") => raw.r = Some(fnum("r")?),
            ("instance", "symmetry") => {
                raw.symmetry = Some(match value {
                    "disc" => SymmetryKind::Disc,
                    "radial" => SymmetryKind::Radial,
                    "toric" => SymmetryKind::Toric,
                    other => return Err(err(line, format!("unknown symmetry \"{other}\""))),
                })
            }
            ("instance", "phi") => raw.phi = Some(Preset::parse(value, line, "phi")?),
            ("instance", "f") => raw.f_root = Some(Preset::parse(value, line, "f")?),
            ("", k) => return Err(err(line, format!("key \"{k}\" before any section"))),
            (s, k) => return Err(err(line, format!("unknown key \"{k}\" in section [{s}]"))),
        }
    }

    let (command, _) = raw
        .command
        .ok_or_else(|| err(0, "missing [run] command"))?;
    let alpha = raw.alpha.unwrap_or(0.5);
    let t = raw.t.unwrap_or(0.25);
    let resolution = raw.resolution.unwrap_or(129);
    // range validation
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(err(0, format!("alpha = {alpha} out of (0, 1]")));
    }
    if matches!(command, Command::VerifyC1a | Command::SecondDiff) && alpha >= 1.0 {
        return Err(err(
            0,
            format!("alpha = {alpha} out of (0, 1) for {}", command.label()),
        ));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(err(0, format!("t = {t} out of (0, 1)")));
    }
    if resolution < 33 {
        return Err(err(0, format!("resolution = {resolution} below 33")));
    }
    let n = raw.n.unwrap_or(1);
    let r = raw.r.unwrap_or(1.0);
    if n == 0 || !(r > 0.0) {
        return Err(err(0, format!("bad instance dimensions n = {n}, r = {r}")));
    }
    Ok(RunConfig {
        command,
        instance: InstanceSpec {
            n,
            r,
            symmetry: raw.symmetry.unwrap_or(SymmetryKind::Disc),
            phi: raw.phi.unwrap_or(Preset::Zero),
            f_root: raw.f_root.unwrap_or(Preset::Const(1.0)),
        },
        alpha,
        t,
        resolution,
        seed: raw.seed.unwrap_or(7),
        out: raw.out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[run]
command = verify-c1a
alpha = 0.5
t = 0.25
resolution = 129
seed = 7
[instance]
n = 1
symmetry = disc
phi = zero
f = const:1
";

    #[test]
    fn minimal_config_parses() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.command, Command::VerifyC1a);
        assert_eq!(c.instance.f_root, Preset::Const(1.0));
        assert_eq!(c.resolution, 129);
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn alpha_out_of_range_names_alpha() {
        let bad = MINIMAL.replace("alpha = 0.5", "alpha = 1.5");
        let e = parse_config(&bad).unwrap_err();
        assert!(e.message.contains("alpha"), "{e}");
    }

    #[test]
    fn unknown_preset_reports_line_number() {
        let bad = MINIMAL.replace("phi = zero", "phi = cubic_spline");
        let e = parse_config(&bad).unwrap_err();
        assert_eq!(e.line, 10, "{e}");
        assert!(e.message.contains("cubic_spline"), "{e}");
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let bad = format!("{MINIMAL}wavelets = 3\n");
        let e = parse_config(&bad).unwrap_err();
        assert_eq!(e.line, 12, "{e}");
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let text = format!("# leading comment\n\n{MINIMAL}\n# trailing\n");
        assert!(parse_config(&text).is_ok());
    }

    #[test]
    fn resolution_floor_enforced() {
        let bad = MINIMAL.replace("resolution = 129", "resolution = 17");
        assert!(parse_config(&bad).is_err());
    }
}
