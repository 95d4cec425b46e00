//! Run configuration: defaults, figure presets, `key=value` files and
//! command-line overrides, merged in that order.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::seeds::BackendChoice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Morse,
    Pt,
    Oscillator,
}

impl std::str::FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "morse" => Ok(Self::Morse),
            "pt" | "poschl-teller" | "poeschl-teller" => Ok(Self::Pt),
            "oscillator" | "ho" => Ok(Self::Oscillator),
            other => Err(Error::Config(format!("unknown family '{other}' (expected morse, pt or oscillator)"))),
        }
    }
}

/// Every setting a run can take. `None` means "use the default".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub family: Option<FamilyName>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub nmax: Option<usize>,
    pub u0: Option<f64>,
    pub r: Option<f64>,
    pub epsilon: Option<f64>,
    pub lambda: Option<f64>,
    pub bigj: Option<f64>,
    pub i0: Option<f64>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub npoints: Option<usize>,
    pub nstates: Option<usize>,
    pub backend: Option<BackendChoice>,
    pub out: Option<PathBuf>,
}

macro_rules! take_over {
    ($dst:expr, $src:expr, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Overrides {
    /// Fields set in `other` replace those in `self`.
    pub fn merge(mut self, other: &Overrides) -> Self {
        take_over!(self, other, family, gamma, delta, nmax, u0, r, epsilon, lambda, bigj, i0, xmin, xmax, npoints, nstates, backend, out);
        self
    }

    /// Apply one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Config(format!("bad value '{v}' for {key}")))
        }
        let v = value.trim();
        match key.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "family" => self.family = Some(v.parse()?),
            "gamma" => self.gamma = Some(num(key, v)?),
            "delta" => self.delta = Some(num(key, v)?),
            "nmax" | "n_max" => self.nmax = Some(num(key, v)?),
            "u0" => self.u0 = Some(num(key, v)?),
            "r" => self.r = Some(num(key, v)?),
            "epsilon" | "eps" => self.epsilon = Some(num(key, v)?),
            "lambda" => self.lambda = Some(num(key, v)?),
            "bigj" | "j" => self.bigj = Some(num(key, v)?),
            "i0" => self.i0 = Some(num(key, v)?),
            "xmin" => self.xmin = Some(num(key, v)?),
            "xmax" => self.xmax = Some(num(key, v)?),
            "npoints" => self.npoints = Some(num(key, v)?),
            "nstates" => self.nstates = Some(num(key, v)?),
            "backend" => self.backend = Some(v.parse()?),
            "out" => self.out = Some(PathBuf::from(v)),
            other => return Err(Error::Config(format!("unknown configuration key '{other}'"))),
        }
        Ok(())
    }

    /// Parse `key=value` lines; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut o = Overrides::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected key=value, got '{line}'", k + 1)));
            };
            o.set(key, value).map_err(|e| Error::Config(format!("line {}: {e}", k + 1)))?;
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Potential family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyConfig {
    Morse { gamma: f64, delta: f64, nmax: usize },
    Pt { u0: f64, r: f64 },
    Oscillator,
}

/// A fully specified construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub family: FamilyConfig,
    pub epsilon: f64,
    pub lambda: f64,
    pub big_j: f64,
    pub i0: f64,
    /// Sampling window; `None` keeps the family default.
    pub window: Option<(f64, f64)>,
    pub npoints: usize,
    /// `None`: all Morse levels, three otherwise.
    pub nstates: Option<usize>,
    pub backend: BackendChoice,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

pub const DEFAULT_NPOINTS: usize = 1200;

impl RunConfig {
    /// Fill defaults. `family` and `epsilon` must be given.
    pub fn resolve(o: &Overrides) -> Result<Self> {
        let family = match o.family {
            None => return Err(Error::Config("no family given (use --family morse|pt|oscillator)".into())),
            Some(FamilyName::Morse) => FamilyConfig::Morse {
                gamma: o.gamma.unwrap_or(1.0),
                delta: o.delta.unwrap_or(0.4),
                nmax: o.nmax.unwrap_or(2),
            },
            Some(FamilyName::Pt) => FamilyConfig::Pt { u0: o.u0.unwrap_or(1.0), r: o.r.unwrap_or(3.0) },
            Some(FamilyName::Oscillator) => FamilyConfig::Oscillator,
        };
        let Some(epsilon) = o.epsilon else {
            return Err(Error::Config("no factorization energy given (use --epsilon)".into()));
        };
        let window = match (o.xmin, o.xmax) {
            (None, None) => None,
            (Some(a), Some(b)) => Some((a, b)),
            _ => return Err(Error::Config("xmin and xmax must be given together".into())),
        };
        let npoints = o.npoints.unwrap_or(DEFAULT_NPOINTS);
        if npoints < 50 {
            return Err(Error::Config(format!("npoints must be at least 50, got {npoints}")));
        }
        Ok(RunConfig {
            family,
            epsilon,
            lambda: o.lambda.unwrap_or(1.0),
            big_j: o.bigj.unwrap_or(1.0),
            i0: o.i0.unwrap_or(0.0),
            window,
            npoints,
            nstates: o.nstates,
            backend: o.backend.unwrap_or_default(),
            out: o.out.clone(),
        })
    }
}

/// Figures whose data the `figure` command regenerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    Fig3,
    Fig4,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    Fig12,
}

impl std::str::FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "fig3" => Self::Fig3,
            "fig4" => Self::Fig4,
            "fig7" => Self::Fig7,
            "fig8" => Self::Fig8,
            "fig9" => Self::Fig9,
            "fig10" => Self::Fig10,
            "fig11" => Self::Fig11,
            "fig12" => Self::Fig12,
            other => return Err(Error::Config(format!("unknown figure '{other}' (fig3, fig4, fig7-fig12)"))),
        })
    }
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig7 => "fig7",
            Self::Fig8 => "fig8",
            Self::Fig9 => "fig9",
            Self::Fig10 => "fig10",
            Self::Fig11 => "fig11",
            Self::Fig12 => "fig12",
        }
    }

    /// Whether panels show eigenfunctions rather than potentials.
    pub fn shows_states(self) -> bool {
        matches!(self, Self::Fig4 | Self::Fig8 | Self::Fig10)
    }
}

/// One panel of a figure: a tag used in file names and its settings.
#[derive(Debug, Clone)]
pub struct Panel {
    pub tag: String,
    pub settings: Overrides,
}

fn morse(nmax: usize, eps: f64, lambda: f64) -> Overrides {
    Overrides {
        family: Some(FamilyName::Morse),
        gamma: Some(1.0),
        delta: Some(0.4),
        nmax: Some(nmax),
        epsilon: Some(eps),
        lambda: Some(lambda),
        bigj: Some(1.0),
        i0: Some(1.0),
        ..Overrides::default()
    }
}

fn pt(r: f64, eps: f64, lambda: f64, bigj: f64, i0: f64) -> Overrides {
    Overrides {
        family: Some(FamilyName::Pt),
        u0: Some(1.0),
        r: Some(r),
        epsilon: Some(eps),
        lambda: Some(lambda),
        bigj: Some(bigj),
        i0: Some(i0),
        ..Overrides::default()
    }
}

fn panel(tag: &str, settings: Overrides) -> Panel {
    Panel { tag: tag.to_string(), settings }
}

/// Preset parameters of each panel.
pub fn figure_panels(id: FigureId) -> Vec<Panel> {
    let pt_sym = |r| pt(r, 0.25, (PI / 4.0).sqrt(), PI / 4.0, 0.0);
    let pt_asym = |r| pt(r, 8.075, 1.34f64.sqrt(), 1.34, -2.13);
    match id {
        FigureId::Fig3 | FigureId::Fig4 => vec![panel("N2", morse(2, 0.0, 1.0)), panel("N4", morse(4, 0.0, 1.0))],
        FigureId::Fig7 => vec![panel("r3", pt_sym(3.0)), panel("r4", pt_sym(4.0))],
        FigureId::Fig8 => vec![panel("r3", pt_sym(3.0))],
        FigureId::Fig9 => vec![panel("r3", pt_asym(3.0)), panel("r4", pt_asym(4.0))],
        FigureId::Fig10 => vec![panel("r3", pt_asym(3.0))],
        FigureId::Fig11 => vec![
            panel("gm1.35", pt(3.0, 5.26, 0.0, 2.74, 3.701)),
            panel("gm0.74", pt(3.0, 5.26, 0.0, 5.0, 3.701)),
        ],
        FigureId::Fig12 => vec![
            panel("a_eps4.55", morse(2, 4.55, 1.0)),
            panel("b_eps4.55_lambda0", morse(2, 4.55, 0.0)),
            panel("c_eps6.45", morse(2, 6.45, 1.0)),
            panel("d_eps6.45_lambda0", morse(2, 6.45, 0.0)),
        ],
    }
}

/// Sorted `key = value` view of a configuration, as written to reports.
pub fn describe(c: &RunConfig) -> BTreeMap<&'static str, String> {
    let mut m = BTreeMap::new();
    match c.family {
        FamilyConfig::Morse { gamma, delta, nmax } => {
            m.insert("family", "morse".into());
            m.insert("gamma", gamma.to_string());
            m.insert("delta", delta.to_string());
            m.insert("nmax", nmax.to_string());
        }
        FamilyConfig::Pt { u0, r } => {
            m.insert("family", "pt".into());
            m.insert("u0", u0.to_string());
            m.insert("r", r.to_string());
        }
        FamilyConfig::Oscillator => {
            m.insert("family", "oscillator".into());
        }
    }
    m.insert("epsilon", c.epsilon.to_string());
    m.insert("lambda", c.lambda.to_string());
    m.insert("bigj", c.big_j.to_string());
    m.insert("i0", c.i0.to_string());
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_parsing_and_override_order() {
        let file = Overrides::parse("# fig 3\nfamily = morse\nepsilon=0\nlambda=1 # inline\n\nnpoints=800\n").unwrap();
        let flags = Overrides { npoints: Some(900), ..Overrides::default() };
        let c = RunConfig::resolve(&file.merge(&flags)).unwrap();
        assert_eq!(c.npoints, 900);
        assert_eq!(c.family, FamilyConfig::Morse { gamma: 1.0, delta: 0.4, nmax: 2 });
        assert_eq!(c.lambda, 1.0);
    }

    #[test]
    fn bad_files_are_config_errors() {
        for text in ["family", "colour=blue", "epsilon=abc", "backend=gpu", "family=square"] {
            assert!(matches!(Overrides::parse(text), Err(Error::Config(_))), "{text}");
        }
        let no_eps = Overrides::parse("family=pt").unwrap();
        assert!(matches!(RunConfig::resolve(&no_eps), Err(Error::Config(_))));
        let half = Overrides::parse("family=pt\nepsilon=0\nxmin=-1").unwrap();
        assert!(RunConfig::resolve(&half).is_err());
    }

    #[test]
    fn presets_resolve() {
        for id in ["fig3", "fig4", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12"] {
            let id: FigureId = id.parse().unwrap();
            for p in figure_panels(id) {
                RunConfig::resolve(&p.settings).unwrap();
            }
        }
        assert!("fig5".parse::<FigureId>().is_err());
    }
}
