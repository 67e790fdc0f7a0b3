//! Sequence grammar and the sliding-history register compiler.
//!
//! ```text
//! seq  := unit+
//! unit := 'A' | 'B' | ('A' | 'B') '^' int | '(' seq ')' '^' int
//! ```
//!
//! Every game writes its result to a fresh qubit. A B game reads the two
//! most recent results; when fewer than two exist, seed qubits are
//! prepended to the register to stand in for them.

use std::fmt;

use crate::error::{Error, Result};

/// Largest register the compiler will lay out.
pub const MAX_QUBITS: usize = 11;

const MAX_NESTING: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    A,
    B,
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameKind::A => "A",
            GameKind::B => "B",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: GameKind,
    pub target: usize,
    /// `(older, newer)` result qubits read by a B game.
    pub history: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequencePlan {
    games: Vec<Step>,
    seed_count: usize,
    total_qubits: usize,
}

impl SequencePlan {
    /// Lays out a flat game list on a register.
    pub fn compile(kinds: &[GameKind]) -> Result<Self> {
        let seed_count = kinds
            .iter()
            .position(|k| *k == GameKind::B)
            .map_or(0, |first_b| 2usize.saturating_sub(first_b));
        let total_qubits = seed_count + kinds.len();
        if total_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                qubits: total_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut results: Vec<usize> = (0..seed_count).collect();
        let games = kinds
            .iter()
            .enumerate()
            .map(|(i, &kind)| {
                let target = seed_count + i;
                let history = match kind {
                    GameKind::A => None,
                    GameKind::B => {
                        let n = results.len();
                        Some((results[n - 2], results[n - 1]))
                    }
                };
                results.push(target);
                Step { kind, target, history }
            })
            .collect();
        Ok(Self {
            games,
            seed_count,
            total_qubits,
        })
    }

    pub fn games(&self) -> &[Step] {
        &self.games
    }

    pub fn game_count(&self) -> usize {
        self.games.len()
    }

    pub fn seed_count(&self) -> usize {
        self.seed_count
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn dim(&self) -> Result<usize> {
        if self.total_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                qubits: self.total_qubits,
                max: MAX_QUBITS,
            });
        }
        Ok(1 << self.total_qubits)
    }

    pub fn kinds(&self) -> Vec<GameKind> {
        self.games.iter().map(|s| s.kind).collect()
    }
}

/// Parses and compiles a game sequence such as `AAB`, `B^3` or `(AAB)^2`.
pub fn parse_sequence(text: &str) -> Result<SequencePlan> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let kinds = p.seq(0)?;
    if p.pos != p.bytes.len() {
        return Err(Error::parse(p.pos, "unexpected ')'"));
    }
    SequencePlan::compile(&kinds)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

fn too_long(games: usize) -> Error {
    Error::TooManyQubits {
        qubits: games,
        max: MAX_QUBITS,
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn seq(&mut self, depth: usize) -> Result<Vec<GameKind>> {
        if depth > MAX_NESTING {
            return Err(Error::parse(self.pos, "groups nested too deeply"));
        }
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None | Some(b')') => break,
                _ => self.unit(depth, &mut out)?,
            }
            if out.len() > MAX_QUBITS {
                return Err(too_long(out.len()));
            }
        }
        if out.is_empty() {
            return Err(Error::parse(self.pos, "expected 'A', 'B' or '('"));
        }
        Ok(out)
    }

    fn unit(&mut self, depth: usize, out: &mut Vec<GameKind>) -> Result<()> {
        let start = self.pos;
        let body = match self.peek() {
            Some(b'A') => {
                self.pos += 1;
                vec![GameKind::A]
            }
            Some(b'B') => {
                self.pos += 1;
                vec![GameKind::B]
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.seq(depth + 1)?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                self.pos += 1;
                if self.peek() != Some(b'^') {
                    return Err(Error::parse(self.pos, "expected '^' after group"));
                }
                inner
            }
            Some(c) => return Err(Error::parse(start, format!("unexpected character {:?}", c as char))),
            None => return Err(Error::parse(start, "unexpected end of input")),
        };
        let count = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.exponent()?
        } else {
            1
        };
        let total = body
            .len()
            .checked_mul(count)
            .and_then(|n| n.checked_add(out.len()))
            .ok_or_else(|| too_long(usize::MAX))?;
        if total > MAX_QUBITS {
            return Err(too_long(total));
        }
        for _ in 0..count {
            out.extend_from_slice(&body);
        }
        Ok(())
    }

    fn exponent(&mut self) -> Result<usize> {
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(c @ b'0'..=b'9') = self.peek() {
            // saturate; any oversized exponent trips the size limit later
            value = value.saturating_mul(10).saturating_add((c - b'0') as usize);
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::parse(start, "expected a repetition count"));
        }
        if value == 0 {
            return Err(Error::parse(start, "repetition count must be positive"));
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> String {
        parse_sequence(s)
            .unwrap()
            .kinds()
            .iter()
            .map(|k| k.to_string())
            .collect()
    }

    #[test]
    fn aab_layout() {
        let plan = parse_sequence("AAB").unwrap();
        assert_eq!(plan.game_count(), 3);
        assert_eq!(plan.seed_count(), 0);
        assert_eq!(plan.total_qubits(), 3);
        assert_eq!(plan.games()[0].history, None);
        assert_eq!(plan.games()[2].history, Some((0, 1)));
        assert_eq!(plan.games()[2].target, 2);
    }

    #[test]
    fn b_series_uses_two_seeds() {
        let plan = parse_sequence("B^2").unwrap();
        assert_eq!(plan.game_count(), 2);
        assert_eq!(plan.seed_count(), 2);
        assert_eq!(plan.total_qubits(), 4);
        assert_eq!(plan.games()[0].history, Some((0, 1)));
        assert_eq!(plan.games()[1].history, Some((1, 2)));
        for n in 1..=9 {
            let plan = parse_sequence(&format!("B^{n}")).unwrap();
            assert_eq!(plan.total_qubits(), n + 2);
        }
    }

    #[test]
    fn a_series_has_no_history() {
        let plan = parse_sequence("A^3").unwrap();
        assert_eq!(plan.seed_count(), 0);
        assert!(plan.games().iter().all(|s| s.history.is_none()));
    }

    #[test]
    fn mixed_sequences() {
        let plan = parse_sequence("AB").unwrap();
        assert_eq!(plan.seed_count(), 1);
        assert_eq!(plan.games()[1].history, Some((0, 1)));
        let plan = parse_sequence("ABBA").unwrap();
        assert_eq!(plan.seed_count(), 1);
        assert_eq!(plan.games()[2].history, Some((1, 2)));
        assert_eq!(kinds("(AB)^2A"), "ABABA");
        assert_eq!(kinds("((A)^2B)^3"), "AABAABAAB");
        assert_eq!(kinds("(AAB)^3"), "AABAABAAB");
    }

    #[test]
    fn malformed_input_reports_offset() {
        let offset = |s: &str| match parse_sequence(s) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{s:?} gave {other:?}"),
        };
        assert_eq!(offset(""), 0);
        assert_eq!(offset("AAC"), 2);
        assert_eq!(offset("(AB"), 3);
        assert_eq!(offset("(AB)"), 4);
        assert_eq!(offset("A^"), 2);
        assert_eq!(offset("A^0"), 2);
        assert_eq!(offset("AB)"), 2);
        assert_eq!(offset("()^2"), 1);
        assert_eq!(offset(" A"), 0);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(parse_sequence("A^12"), Err(Error::TooManyQubits { .. })));
        assert!(matches!(
            parse_sequence("B^10"),
            Err(Error::TooManyQubits { qubits: 12, .. })
        ));
        assert!(parse_sequence("B^9").is_ok());
        assert!(matches!(
            parse_sequence("(AB)^99999999999999999999999"),
            Err(Error::TooManyQubits { .. })
        ));
        let deep = "(".repeat(100) + "A" + &")^1".repeat(100);
        assert!(matches!(parse_sequence(&deep), Err(Error::Parse { .. })));
    }
}
