use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Equalization algorithms known to the complexity model. Local LMMSE and
/// strongest-beams only have cost formulas here; the other five can also be
/// built and simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Exact LMMSE; antenna-domain cost model, beamspace construction.
    Lmmse,
    LocalLmmse,
    /// Strongest beams.
    Sb,
    /// Column-wise orthogonal matching pursuit.
    Comp,
    /// Largest columns.
    Lc,
    /// Entry-wise orthogonal matching pursuit.
    Eomp,
    /// Largest entries.
    Le,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Lmmse,
        Algorithm::LocalLmmse,
        Algorithm::Sb,
        Algorithm::Comp,
        Algorithm::Lc,
        Algorithm::Eomp,
        Algorithm::Le,
    ];

    pub const SPARSE: [Algorithm; 4] = [Algorithm::Comp, Algorithm::Lc, Algorithm::Eomp, Algorithm::Le];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Lmmse => "LMMSE",
            Algorithm::LocalLmmse => "LocalLMMSE",
            Algorithm::Sb => "SB",
            Algorithm::Comp => "COMP",
            Algorithm::Lc => "LC",
            Algorithm::Eomp => "EOMP",
            Algorithm::Le => "LE",
        }
    }

    /// Whether an equalizer can be constructed (and hence simulated).
    pub fn is_buildable(self) -> bool {
        !matches!(self, Algorithm::LocalLmmse | Algorithm::Sb)
    }

    /// Beamspace algorithms pay the FFT and sparse-equalization costs.
    pub fn is_beamspace(self) -> bool {
        self != Algorithm::Lmmse
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(&key))
            .ok_or_else(|| Error::Parameter(format!("unknown algorithm `{s}`")))
    }
}
