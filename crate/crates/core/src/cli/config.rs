//! Plain-text run configuration: `[game]`, `[noise]` and `[sweep]` sections
//! holding `key = value` lines, with `#` comments.

use crate::error::{Error, Result};

const GAME_KEYS: &[&str] = &[
    "seq",
    "eps",
    "theta",
    "gamma",
    "delta",
    "phi1",
    "phi2",
    "phi3",
    "phi4",
    "alpha1",
    "alpha2",
    "alpha3",
    "alpha4",
    "beta1",
    "beta2",
    "beta3",
    "beta4",
    "max_phases",
    "classical",
    "identity_coins",
    "convention",
];
const NOISE_KEYS: &[&str] = &["channel", "p"];
const SWEEP_KEYS: &[&str] = &["var", "grid", "jobs", "out"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Game,
    Noise,
    Sweep,
}

impl Section {
    fn parse(name: &str) -> Option<Self> {
        match name {
            "game" => Some(Section::Game),
            "noise" => Some(Section::Noise),
            "sweep" => Some(Section::Sweep),
            _ => None,
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Section::Game => GAME_KEYS,
            Section::Noise => NOISE_KEYS,
            Section::Sweep => SWEEP_KEYS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub section: Section,
    pub key: String,
    pub value: String,
    /// Byte offset of the value in the source text.
    pub offset: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub entries: Vec<Entry>,
}

impl ConfigFile {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

/// Unknown sections and keys, keys outside a section, and repeated keys are
/// all errors.
pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let mut section = None;
    let mut entries: Vec<Entry> = Vec::new();
    let mut line_start = 0;
    for raw in text.split('\n') {
        let here = line_start;
        line_start += raw.len() + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lead = here + (content.len() - content.trim_start().len());
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(lead, "unterminated section header"))?;
            section = Some(
                Section::parse(name.trim())
                    .ok_or_else(|| Error::parse(lead, format!("unknown section [{}]", name.trim())))?,
            );
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(Error::parse(lead, "expected key = value"));
        };
        let Some(current) = section else {
            return Err(Error::parse(lead, "key outside of a section"));
        };
        let key = key.trim();
        if !current.keys().contains(&key) {
            return Err(Error::parse(lead, format!("unknown key {key:?}")));
        }
        if entries.iter().any(|e| e.key == key) {
            return Err(Error::parse(lead, format!("duplicate key {key:?}")));
        }
        let value_start = trimmed.find('=').map_or(0, |i| i + 1);
        let value_pad = trimmed[value_start..].len() - trimmed[value_start..].trim_start().len();
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::parse(lead + value_start, format!("missing value for {key:?}")));
        }
        entries.push(Entry {
            section: current,
            key: key.to_string(),
            value: value.to_string(),
            offset: lead + value_start + value_pad,
        });
    }
    Ok(ConfigFile { entries })
}

pub(crate) fn parse_bool(text: &str, offset: usize) -> Result<bool> {
    match text {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::parse(offset, format!("expected true or false, found {text:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let text = "# figure 1\n[game]\nseq = AAB\neps = 1/168 # tiny bias\n\n[noise]\nchannel = ad, dp\np = 0.5\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.entries.len(), 4);
        assert_eq!(cfg.get("eps").unwrap().value, "1/168");
        let ch = cfg.get("channel").unwrap();
        assert_eq!(ch.section, Section::Noise);
        assert_eq!(&text[ch.offset..ch.offset + 2], "ad");
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "seq = A",
            "[game\nseq = A",
            "[plot]",
            "[game]\ncolour = red",
            "[game]\nseq = A\nseq = B",
            "[game]\nseq",
            "[game]\nseq =",
            "[noise]\nseq = A",
        ] {
            assert!(parse_config(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn error_offsets_point_at_the_line() {
        match parse_config("[game]\n  bogus = 1") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 9),
            other => panic!("{other:?}"),
        }
    }
}
