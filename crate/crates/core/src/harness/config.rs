use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::code::{build_tanner155, load_alist, sample_regular, TannerGraph};
use crate::error::{Error, Result};
use crate::lpfc::LpfcConfig;

/// Where the code of each trial comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum CodeSpec {
    Alist(PathBuf),
    /// Random `(dl, dr)`-regular code on `n` variables. With `fixed` one code
    /// is drawn for the whole sweep, otherwise every trial draws its own.
    Ensemble { n: usize, dl: usize, dr: usize, fixed: bool },
    Tanner155,
}

impl CodeSpec {
    /// Rate `1 - m/n` of the parity-check matrix, which is what the
    /// `Eb/N0` axis is plotted against.
    pub fn design_rate(&self) -> Result<f64> {
        match self {
            CodeSpec::Ensemble { dl, dr, .. } => Ok(1.0 - *dl as f64 / *dr as f64),
            CodeSpec::Tanner155 => Ok(1.0 - 93.0 / 155.0),
            CodeSpec::Alist(path) => {
                let g = read_alist(path)?;
                Ok(1.0 - g.m() as f64 / g.n() as f64)
            }
        }
    }

    pub fn resamples(&self) -> bool {
        matches!(self, CodeSpec::Ensemble { fixed: false, .. })
    }

    /// The code for a given seed. Only ensembles look at the seed.
    pub fn build(&self, seed: u64) -> Result<TannerGraph> {
        match self {
            CodeSpec::Alist(path) => read_alist(path),
            CodeSpec::Ensemble { n, dl, dr, .. } => sample_regular(*n, *dl, *dr, seed),
            CodeSpec::Tanner155 => Ok(build_tanner155()),
        }
    }
}

fn read_alist(path: &Path) -> Result<TannerGraph> {
    load_alist(&std::fs::read_to_string(path)?)
}

/// `tanner155`, `ensemble:N:DL:DR` (append `:fixed` for one shared code),
/// or a path to an alist file.
impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "tanner155" {
            return Ok(CodeSpec::Tanner155);
        }
        if let Some(rest) = s.strip_prefix("ensemble:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let fixed = match parts.get(3) {
                None => false,
                Some(&"fixed") => true,
                Some(other) => return Err(Error::Config(format!("unknown ensemble flag {other:?}"))),
            };
            if parts.len() < 3 || parts.len() > 4 {
                return Err(Error::Config(format!("expected ensemble:N:DL:DR, got {s:?}")));
            }
            return Ok(CodeSpec::Ensemble {
                n: parse_num("code.n", parts[0])?,
                dl: parse_num("code.dl", parts[1])?,
                dr: parse_num("code.dr", parts[2])?,
                fixed,
            });
        }
        Ok(CodeSpec::Alist(PathBuf::from(s)))
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSpec::Alist(p) => write!(f, "{}", p.display()),
            CodeSpec::Ensemble { n, dl, dr, fixed } => {
                write!(f, "ensemble:{n}:{dl}:{dr}")?;
                if *fixed {
                    write!(f, ":fixed")?;
                }
                Ok(())
            }
            CodeSpec::Tanner155 => write!(f, "tanner155"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderChoice {
    /// Basic LP and LP-FC on the same input.
    Paired,
    /// Basic LP only; the LP-FC columns repeat the basic result.
    Basic,
}

impl FromStr for DecoderChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paired" | "lpfc" => Ok(DecoderChoice::Paired),
            "basic" => Ok(DecoderChoice::Basic),
            _ => Err(Error::Config(format!("unknown decoder {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub code: CodeSpec,
    pub sigmas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub decoder: DecoderChoice,
    pub lpfc: LpfcConfig,
    /// Trial CSV destination; the WER summary goes next to it.
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(code: CodeSpec, sigmas: Vec<f64>, trials: usize, seed: u64) -> Self {
        Self {
            code,
            sigmas,
            trials,
            seed,
            decoder: DecoderChoice::Paired,
            lpfc: LpfcConfig::default(),
            out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.sigmas.is_empty() {
            return Err(Error::Config("sigma.list is empty".into()));
        }
        if let Some(s) = self.sigmas.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(Error::Config(format!("sigma {s} must be positive")));
        }
        if let CodeSpec::Ensemble { n, dl, dr, .. } = self.code {
            if n == 0 || dl == 0 || dr <= dl || (n * dl) % dr != 0 {
                return Err(Error::Config(format!("bad ensemble n={n} dl={dl} dr={dr}")));
            }
        }
        self.lpfc.validate()
    }

    /// Parses flat `key = value` text. `#` starts a comment.
    ///
    /// Keys: `code.kind` (ensemble, tanner155, alist), `code.n`, `code.dl`,
    /// `code.dr`, `code.fixed`, `code.path`, `sigma.list` (comma separated),
    /// `trials`, `seed`, `decoder` (paired, basic), `out`,
    /// `lpfc.max_iterations`, `lpfc.eps`, `lpfc.warm_start`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kind = String::from("ensemble");
        let (mut n, mut dl, mut dr, mut fixed) = (60, 3, 4, false);
        let mut path = None;
        let mut cfg = RunConfig::new(CodeSpec::Tanner155, Vec::new(), 0, 0);
        let mut have = (false, false);

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected key = value", lineno + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "code.kind" => kind = value.to_string(),
                "code.n" => n = parse_num(key, value)?,
                "code.dl" => dl = parse_num(key, value)?,
                "code.dr" => dr = parse_num(key, value)?,
                "code.fixed" => fixed = parse_num(key, value)?,
                "code.path" => path = Some(PathBuf::from(value)),
                "sigma.list" => {
                    cfg.sigmas = value
                        .split(',')
                        .map(|s| parse_num(key, s.trim()))
                        .collect::<Result<_>>()?;
                    have.0 = true;
                }
                "trials" => {
                    cfg.trials = parse_num(key, value)?;
                    have.1 = true;
                }
                "seed" => cfg.seed = parse_num(key, value)?,
                "decoder" => cfg.decoder = value.parse()?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                "lpfc.max_iterations" => cfg.lpfc.max_iterations = parse_num(key, value)?,
                "lpfc.eps" => cfg.lpfc.eps = parse_num(key, value)?,
                "lpfc.warm_start" => cfg.lpfc.warm_start = parse_num(key, value)?,
                _ => return Err(Error::Config(format!("unknown key {key:?}"))),
            }
        }
        if !have.0 {
            return Err(Error::Config("missing sigma.list".into()));
        }
        if !have.1 {
            return Err(Error::Config("missing trials".into()));
        }
        cfg.code = match kind.as_str() {
            "ensemble" => CodeSpec::Ensemble { n, dl, dr, fixed },
            "tanner155" => CodeSpec::Tanner155,
            "alist" => CodeSpec::Alist(path.ok_or_else(|| Error::Config("code.kind = alist needs code.path".into()))?),
            other => return Err(Error::Config(format!("unknown code.kind {other:?}"))),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let cfg = RunConfig::parse(
            "# desk run\ncode.kind = ensemble\ncode.n = 60\ncode.dl=3\ncode.dr=4\n\
             sigma.list = 1.0, 1.1\ntrials = 20\nseed = 7\ndecoder = paired\nout = /tmp/x.csv\n\
             lpfc.max_iterations = 30\n",
        )
        .unwrap();
        assert_eq!(cfg.code, CodeSpec::Ensemble { n: 60, dl: 3, dr: 4, fixed: false });
        assert_eq!(cfg.sigmas, vec![1.0, 1.1]);
        assert_eq!((cfg.trials, cfg.seed), (20, 7));
        assert_eq!(cfg.lpfc.max_iterations, 30);
        assert_eq!(cfg.out.as_deref(), Some(Path::new("/tmp/x.csv")));
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "sigma.list = 1.0\n",
            "trials = 3\n",
            "sigma.list = 1.0\ntrials = 0\n",
            "sigma.list = -1.0\ntrials = 3\n",
            "sigma.list = 1.0\ntrials = 3\nbogus = 1\n",
            "sigma.list = 1.0\ntrials = 3\ncode.kind = alist\n",
            "sigma.list = 1.0\ntrials = 3\ncode.n = 61\n",
            "sigma.list = 1.0\ntrials = 3\ndecoder = bp\n",
            "sigma.list\n",
        ] {
            assert!(matches!(RunConfig::parse(text), Err(Error::Config(_))), "{text:?}");
        }
    }

    #[test]
    fn code_spec_round_trip() {
        for s in ["tanner155", "ensemble:60:3:4", "ensemble:20:3:6:fixed", "codes/x.alist"] {
            assert_eq!(s.parse::<CodeSpec>().unwrap().to_string(), s);
        }
        assert!("ensemble:60:3".parse::<CodeSpec>().is_err());
        assert!("ensemble:60:3:4:loose".parse::<CodeSpec>().is_err());
    }

    #[test]
    fn design_rates() {
        let e = CodeSpec::Ensemble { n: 60, dl: 3, dr: 4, fixed: false };
        assert!((e.design_rate().unwrap() - 0.25).abs() < 1e-15);
        assert!((CodeSpec::Tanner155.design_rate().unwrap() - 0.4).abs() < 1e-15);
    }
}
