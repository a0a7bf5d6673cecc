//! JSON input documents and CSV output.
//!
//! Input schema:
//!
//! ```json
//! {"spectrum": {"kind": "harmonic", "omega": 1.0, "n": 16, "hbar": 1.0},
//!  "state": {"re": [...], "im": [...]}}
//! ```
//!
//! `kind` is one of `harmonic` (`omega`), `box` (`scale`) or `custom`
//! (`levels`; `n` may be omitted). `hbar` defaults to 1 and `state` is
//! optional. Floating-point CSV fields carry 17 significant digits.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::{build_spectrum, EnergySpectrum, QuantumState, SpectrumKind};

fn default_hbar() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSpec {
    #[serde(flatten)]
    pub kind: SpectrumKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

impl SpectrumSpec {
    pub fn build(&self) -> Result<EnergySpectrum> {
        let n = match (&self.kind, self.n) {
            (_, Some(n)) => n,
            (SpectrumKind::Custom { levels }, None) => levels.len(),
            (_, None) => 0,
        };
        build_spectrum(&self.kind, n, self.hbar)
    }

    /// Describes an existing spectrum verbatim as a custom level list.
    pub fn from_spectrum(spectrum: &EnergySpectrum) -> Self {
        Self {
            kind: SpectrumKind::Custom {
                levels: spectrum.levels().to_vec(),
            },
            n: Some(spectrum.len()),
            hbar: spectrum.hbar(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub re: Vec<f64>,
    /// Omitted or empty means all-real.
    #[serde(default)]
    pub im: Vec<f64>,
}

impl StateSpec {
    pub fn build(&self) -> Result<QuantumState> {
        if self.im.is_empty() {
            QuantumState::from_parts(&self.re, &vec![0.0; self.re.len()])
        } else {
            QuantumState::from_parts(&self.re, &self.im)
        }
    }

    pub fn from_state(state: &QuantumState) -> Self {
        Self {
            re: state.real_parts(),
            im: state.imag_parts(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    pub spectrum: SpectrumSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
}

impl InputDocument {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn new(spectrum: &EnergySpectrum, state: Option<&QuantumState>) -> Self {
        Self {
            spectrum: SpectrumSpec::from_spectrum(spectrum),
            state: state.map(StateSpec::from_state),
        }
    }

    /// Validated spectrum and (if present) state, with matching lengths.
    pub fn build(&self) -> Result<(EnergySpectrum, Option<QuantumState>)> {
        let spectrum = self.spectrum.build()?;
        let state = self.state.as_ref().map(StateSpec::build).transpose()?;
        if let Some(psi) = &state {
            crate::spectral::check_dim(spectrum.len(), psi.len())?;
        }
        Ok((spectrum, state))
    }
}

/// `f64` with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV cell: integers print plainly, reals with 17 significant digits.
#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Int(u64),
    Real(f64),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

pub fn write_csv<W, R>(out: &mut W, header: &[&str], rows: R) -> io::Result<()>
where
    W: Write + ?Sized,
    R: IntoIterator<Item = Vec<Cell>>,
{
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row
            .into_iter()
            .map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Real(r) => fmt_f64(r),
            })
            .collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// `tau,value` CSV for a [`crate::galapon::DeviationSeries`].
pub fn write_series_csv<W: Write + ?Sized>(
    out: &mut W,
    series: &crate::galapon::DeviationSeries,
) -> io::Result<()> {
    write_csv(
        out,
        &["tau", "value"],
        series.iter().map(|(t, v)| vec![t.into(), v.into()]),
    )
}
