use std::fs;
use std::path::Path;

use halstd_core::{Scenario, ScenarioSpec};

use crate::error::CliError;

/// Read, parse and validate a scenario file.
///
/// Unreadable or malformed files give exit code 3; a well-formed file that
/// breaks invariants gives exit code 1 with every violation listed.
pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, path)
}

/// [`load_scenario`] on an in-memory document; `path` only labels errors.
pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario, CliError> {
    let spec: ScenarioSpec = serde_json::from_str(text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    spec.validate().map_err(|errors| CliError::Invalid {
        path: path.to_path_buf(),
        errors,
    })
}

/// Pretty JSON for a scenario, readable back by [`parse_scenario`].
pub fn scenario_to_json(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(&scenario.clone().into_spec()).expect("scenario serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{
        "domain": {"alpha": 1.0, "theta": 3.0, "rho": 0.5, "zeta": 1.0},
        "cost": {"family": "inverse", "a": 1.0, "b": 1.0},
        "products": [{"id": "a", "delta": 2.0, "omega": 0.1, "h": 0.3}]
    }"#;

    #[test]
    fn parses_with_default_bounds() {
        let s = parse_scenario(GOOD, Path::new("good.json")).unwrap();
        assert_eq!(s.cost().h_lo, 0.01);
        assert_eq!(s.cost().h_hi, 1.0);
        assert_eq!(s.products()[0].id, "a");
        let again = parse_scenario(&scenario_to_json(&s), Path::new("again.json")).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn all_violations_reported() {
        let bad = GOOD.replace("\"rho\": 0.5", "\"rho\": 1.5").replace("\"h\": 0.3", "\"h\": 2.0");
        let err = parse_scenario(&bad, Path::new("bad.json")).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        let msg = err.to_string();
        assert!(msg.contains("domain.rho") && msg.contains("[0,1]"), "{msg}");
        assert!(msg.contains("products[0].h"), "{msg}");
    }

    #[test]
    fn syntax_errors_are_parse_errors() {
        let err = parse_scenario("{ not json", Path::new("x.json")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = load_scenario(Path::new("/definitely/missing.json")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
