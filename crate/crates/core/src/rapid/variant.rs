//! Readings of the printed rapid series at the places where the printed text
//! is ambiguous or suspect. Each site has a default reading (the text taken
//! literally) and one alternative.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};
use crate::series::FormulaId;

/// The three rapid series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RapidFormula {
    /// `zeta(2m+1)`
    OddZeta,
    /// `L(2m+1, chi)`, `chi` even primitive
    LOddArgument,
    /// `L(2m, chi)`, `chi` odd primitive
    LEvenArgument,
}

impl RapidFormula {
    pub const ALL: [RapidFormula; 3] = [
        RapidFormula::OddZeta,
        RapidFormula::LOddArgument,
        RapidFormula::LEvenArgument,
    ];

    pub fn formula_id(&self) -> FormulaId {
        match self {
            RapidFormula::OddZeta => FormulaId::OddZetaRapid,
            RapidFormula::LOddArgument => FormulaId::LOddRapid,
            RapidFormula::LEvenArgument => FormulaId::LEvenRapid,
        }
    }

    pub fn from_formula_id(id: FormulaId) -> Result<Self> {
        match id {
            FormulaId::OddZetaRapid => Ok(RapidFormula::OddZeta),
            FormulaId::LOddRapid => Ok(RapidFormula::LOddArgument),
            FormulaId::LEvenRapid => Ok(RapidFormula::LEvenArgument),
            other => Err(ZetaError::Parse(format!("{other} is not a rapid series"))),
        }
    }

    pub fn sites(&self) -> &'static [Site] {
        match self {
            RapidFormula::OddZeta => &[Site::Grouping, Site::TailFactor, Site::Prefactor],
            RapidFormula::LOddArgument => &[
                Site::Exponent,
                Site::TailFactor,
                Site::LogScaling,
                Site::HarmonicScaling,
            ],
            RapidFormula::LEvenArgument => &[Site::LogScaling, Site::HarmonicSign],
        }
    }
}

impl fmt::Display for RapidFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.formula_id().as_str())
    }
}

/// A suspect place in a printed series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Site {
    /// `1/2 H_{2m}` and the `zeta'(-2k)` sum: separate addends, or a product
    Grouping,
    /// tail weight `(2k-1)` as printed, or `(2k-1)!`
    TailFactor,
    /// outer denominator `2m` as printed, or `(2m)!`
    Prefactor,
    /// power-sum exponent `2m-k` as printed, or `2m-2k`
    Exponent,
    /// logarithmic brace as printed, or scaled by `q^{-M}`
    LogScaling,
    /// harmonic term as printed, or scaled by `q^{-2m}`
    HarmonicScaling,
    /// harmonic term subtracted as printed, or added
    HarmonicSign,
}

impl Site {
    pub fn name(&self) -> &'static str {
        match self {
            Site::Grouping => "grouping",
            Site::TailFactor => "tail_factor",
            Site::Prefactor => "prefactor",
            Site::Exponent => "exponent",
            Site::LogScaling => "log_scaling",
            Site::HarmonicScaling => "harmonic_scaling",
            Site::HarmonicSign => "harmonic_sign",
        }
    }

    /// `[default, alternative]` reading names.
    pub fn readings(&self) -> [&'static str; 2] {
        match self {
            Site::Grouping => ["separate", "product"],
            Site::TailFactor | Site::Prefactor => ["literal", "factorial"],
            Site::Exponent => ["printed", "doubled"],
            Site::LogScaling | Site::HarmonicScaling => ["printed", "scaled"],
            Site::HarmonicSign => ["printed", "flipped"],
        }
    }
}

/// One reading per site, as a bit set over [`RapidFormula::sites`]
/// (bit set = alternative reading).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variant {
    pub formula: RapidFormula,
    alternatives: u8,
}

impl Variant {
    /// Every site read literally.
    pub fn as_printed(formula: RapidFormula) -> Self {
        Variant {
            formula,
            alternatives: 0,
        }
    }

    pub fn all(formula: RapidFormula) -> Vec<Variant> {
        let n = formula.sites().len();
        (0..1u8 << n)
            .map(|alternatives| Variant {
                formula,
                alternatives,
            })
            .collect()
    }

    pub fn is_alternative(&self, site: Site) -> bool {
        self.formula
            .sites()
            .iter()
            .position(|s| *s == site)
            .is_some_and(|i| self.alternatives >> i & 1 == 1)
    }

    /// `site=reading,...` in site order.
    pub fn tag(&self) -> String {
        self.formula
            .sites()
            .iter()
            .map(|s| {
                let r = s.readings()[usize::from(self.is_alternative(*s))];
                format!("{}={}", s.name(), r)
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(formula: RapidFormula, tag: &str) -> Result<Self> {
        let sites = formula.sites();
        let mut alternatives = 0u8;
        let mut seen = 0u8;
        for part in tag.split(',').filter(|p| !p.is_empty()) {
            let (name, reading) = part
                .split_once('=')
                .ok_or_else(|| ZetaError::Parse(format!("bad variant entry {part:?}")))?;
            let i = sites
                .iter()
                .position(|s| s.name() == name)
                .ok_or_else(|| ZetaError::Parse(format!("{formula} has no site {name:?}")))?;
            let r = sites[i]
                .readings()
                .iter()
                .position(|r| *r == reading)
                .ok_or_else(|| ZetaError::Parse(format!("unknown reading {reading:?} for {name}")))?;
            seen |= 1 << i;
            alternatives |= (r as u8) << i;
        }
        if seen.count_ones() as usize != sites.len() {
            return Err(ZetaError::Parse(format!("variant {tag:?} does not name every site")));
        }
        Ok(Variant {
            formula,
            alternatives,
        })
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for f in RapidFormula::ALL {
            let all = Variant::all(f);
            assert_eq!(all.len(), 1 << f.sites().len());
            for v in all {
                assert_eq!(Variant::parse(f, &v.tag()).unwrap(), v);
            }
        }
        assert_eq!(
            Variant::as_printed(RapidFormula::OddZeta).tag(),
            "grouping=separate,tail_factor=literal,prefactor=literal"
        );
        assert!(Variant::parse(RapidFormula::OddZeta, "grouping=product").is_err());
    }
}
