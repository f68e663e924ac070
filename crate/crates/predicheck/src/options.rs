//! Settings shared by every subcommand.

use predicheck_core::dtt::SortMode;
use predicheck_core::logic::AxiomProfile;

pub const FUEL_ENV: &str = "PREDICHECK_FUEL";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    /// Flag switches applied over every profile declaration.
    pub overrides: Vec<(String, bool)>,
    pub mode: Option<SortMode>,
    pub fuel: u64,
}

impl Default for Options {
    fn default() -> Options {
        Options { overrides: Vec::new(), mode: None, fuel: predicheck_core::DEFAULT_FUEL }
    }
}

/// `+lem,-irc` style profile switches; a bare name switches a flag on.
pub fn parse_profile(spec: &str) -> Result<Vec<(String, bool)>, String> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (on, name) = match part.as_bytes()[0] {
            b'+' => (true, &part[1..]),
            b'-' => (false, &part[1..]),
            _ => (true, part),
        };
        if !AxiomProfile::default().set(name, true) {
            return Err(format!("unknown profile flag '{name}'"));
        }
        out.push((name.to_string(), on));
    }
    Ok(out)
}

pub fn parse_mode(s: &str) -> Result<SortMode, String> {
    SortMode::from_name(s).ok_or_else(|| format!("unknown mode '{s}' (expected mltt, mtt or emtt)"))
}

/// `--fuel` if given, else the environment, else the default.
pub fn resolve_fuel(flag: Option<u64>) -> Result<u64, String> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match std::env::var(FUEL_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| format!("{FUEL_ENV} must be a non-negative integer, found '{v}'")),
        Err(_) => Ok(predicheck_core::DEFAULT_FUEL),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles() {
        assert_eq!(
            parse_profile("+lem,-irc, ac!").unwrap(),
            [("lem".to_string(), true), ("irc".to_string(), false), ("ac!".to_string(), true)]
        );
        assert!(parse_profile("+magic").is_err());
        assert!(parse_profile("").unwrap().is_empty());
    }
}
