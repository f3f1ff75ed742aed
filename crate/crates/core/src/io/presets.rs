//! Reduced-scale pattern configurations shipped with the library.

use super::config::{parse_config, SimulationConfig};
use crate::error::{invalid, Result};

/// `(name, file contents)` for every shipped preset.
pub const PRESETS: [(&str, &str); 6] = [
    ("gs-desk-2.0-0.063", include_str!("../../presets/gs-desk-2.0-0.063.toml")),
    ("gs-desk-1.7-0.063", include_str!("../../presets/gs-desk-1.7-0.063.toml")),
    ("gs-desk-1.5-0.063", include_str!("../../presets/gs-desk-1.5-0.063.toml")),
    ("gs-desk-2.0-0.055", include_str!("../../presets/gs-desk-2.0-0.055.toml")),
    ("gs-desk-1.7-0.055", include_str!("../../presets/gs-desk-1.7-0.055.toml")),
    ("gs-desk-1.5-0.055", include_str!("../../presets/gs-desk-1.5-0.055.toml")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|p| p.0)
}

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|p| p.0 == name).map(|p| p.1)
}

pub fn load_preset(name: &str) -> Result<SimulationConfig> {
    let text = preset_text(name).ok_or_else(|| {
        invalid(
            "preset",
            format!("unknown preset {name:?}; available: {}", preset_names().collect::<Vec<_>>().join(", ")),
        )
    })?;
    parse_config(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_parse() {
        for name in preset_names() {
            let cfg = load_preset(name).unwrap();
            assert_eq!(cfg.time.steps(), 50_000);
            assert_eq!(cfg.snapshot_times.len(), 11);
            let alpha: f64 = name.split('-').nth(2).unwrap().parse().unwrap();
            assert_eq!(cfg.params.alpha().value(), alpha);
        }
        assert!(load_preset("nope").unwrap_err().to_string().contains("gs-desk-2.0-0.063"));
    }
}
