//! Kansei word collection, grouping and bipolar pairing.
//!
//! Words are deduplicated case-insensitively; the first-seen casing wins.
//! Grouping is explicit input rather than clustering, and every bipolar
//! pair carries one of Goldman's six emotion categories.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("empty Kansei word")]
    EmptyWord,
    #[error("unknown Kansei word `{0}`")]
    UnknownWord(String),
    #[error("representative `{representative}` is not a member of group `{group}`")]
    RepresentativeNotInGroup {
        group: String,
        representative: String,
    },
    #[error("group `{0}` has several members but no representative")]
    MissingRepresentative(String),
    #[error("word `{word}` assigned to group `{second}` but already belongs to `{first}`")]
    DuplicateAssignment {
        word: String,
        first: String,
        second: String,
    },
    #[error("bipolar pair `{0}` uses the positive word as its own antonym")]
    DegeneratePair(String),
    #[error("invalid lexicon file: {0}")]
    Format(String),
}

/// Where a Kansei word was collected from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WordSource {
    Experts,
    ExperiencedUsers,
    RelatedStudies,
    IdeasVisions,
    Literature,
}

/// Goldman's six categories of emotional response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GoldmanCategory {
    BroadlyEvaluative,
    Novelty,
    Complexity,
    Intensity,
    Unity,
    Prototypicality,
}

impl GoldmanCategory {
    pub const ALL: [GoldmanCategory; 6] = [
        GoldmanCategory::BroadlyEvaluative,
        GoldmanCategory::Novelty,
        GoldmanCategory::Complexity,
        GoldmanCategory::Intensity,
        GoldmanCategory::Unity,
        GoldmanCategory::Prototypicality,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KanseiWord {
    pub text: String,
    pub source: WordSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordGroup {
    pub name: String,
    pub members: Vec<KanseiWord>,
    pub representative: KanseiWord,
}

/// A positive Kansei word and its antonym, scored 5 at the positive pole
/// and 1 at the negative pole.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipolarPair {
    pub positive: KanseiWord,
    pub negative: String,
    pub category: GoldmanCategory,
}

impl BipolarPair {
    /// The positive word, which names the pair in survey column headers.
    pub fn word(&self) -> &str {
        &self.positive.text
    }
}

fn normalize(text: &str) -> Result<&str, LexiconError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        Err(LexiconError::EmptyWord)
    } else {
        Ok(trimmed)
    }
}

fn same_word(a: &str, b: &str) -> bool {
    a.trim().to_lowercase() == b.trim().to_lowercase()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    words: Vec<KanseiWord>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn words(&self) -> &[KanseiWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Adds a word, trimming surrounding whitespace. Re-adding a word that
    /// differs only in case is a no-op.
    pub fn add_word(&mut self, text: &str, source: WordSource) -> Result<(), LexiconError> {
        let text = normalize(text)?;
        if self.find(text).is_none() {
            self.words.push(KanseiWord {
                text: text.to_string(),
                source,
            });
        }
        Ok(())
    }

    pub fn find(&self, text: &str) -> Option<&KanseiWord> {
        self.words.iter().find(|w| same_word(&w.text, text))
    }

    fn lookup(&self, text: &str) -> Result<&KanseiWord, LexiconError> {
        let text = normalize(text)?;
        self.find(text)
            .ok_or_else(|| LexiconError::UnknownWord(text.to_string()))
    }

    /// Builds groups from `(word, group)` assignments. Groups come back in
    /// order of first appearance. `representatives` maps group names to the
    /// chosen word; a singleton group may omit it.
    pub fn group_words<W, G>(
        &self,
        assignments: &[(W, G)],
        representatives: &[(G, W)],
    ) -> Result<Vec<WordGroup>, LexiconError>
    where
        W: AsRef<str>,
        G: AsRef<str>,
    {
        let mut groups: Vec<(String, Vec<KanseiWord>)> = Vec::new();
        let mut owner: Vec<(String, String)> = Vec::new();

        for (word, group) in assignments {
            let word = self.lookup(word.as_ref())?;
            let group = group.as_ref().trim();
            if let Some((_, first)) = owner.iter().find(|(w, _)| same_word(w, &word.text)) {
                return Err(LexiconError::DuplicateAssignment {
                    word: word.text.clone(),
                    first: first.clone(),
                    second: group.to_string(),
                });
            }
            owner.push((word.text.clone(), group.to_string()));
            match groups.iter_mut().find(|(name, _)| name == group) {
                Some((_, members)) => members.push(word.clone()),
                None => groups.push((group.to_string(), vec![word.clone()])),
            }
        }

        groups
            .into_iter()
            .map(|(name, members)| {
                let chosen = representatives
                    .iter()
                    .find(|(g, _)| g.as_ref().trim() == name)
                    .map(|(_, w)| w.as_ref());
                let representative = match chosen {
                    Some(rep) => members
                        .iter()
                        .find(|m| same_word(&m.text, rep))
                        .cloned()
                        .ok_or_else(|| LexiconError::RepresentativeNotInGroup {
                            group: name.clone(),
                            representative: rep.trim().to_string(),
                        })?,
                    None if members.len() == 1 => members[0].clone(),
                    None => return Err(LexiconError::MissingRepresentative(name)),
                };
                Ok(WordGroup {
                    name,
                    members,
                    representative,
                })
            })
            .collect()
    }

    pub fn make_bipolar(
        &self,
        word: &str,
        negative: &str,
        category: GoldmanCategory,
    ) -> Result<BipolarPair, LexiconError> {
        let positive = self.lookup(word)?.clone();
        let negative = normalize(negative)?;
        if same_word(&positive.text, negative) {
            return Err(LexiconError::DegeneratePair(positive.text));
        }
        Ok(BipolarPair {
            positive,
            negative: negative.to_string(),
            category,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordEntry {
    pub text: String,
    pub source: WordSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupEntry {
    pub name: String,
    pub members: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representative: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub positive: String,
    pub negative: String,
    pub category: GoldmanCategory,
}

/// On-disk lexicon layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconFile {
    pub words: Vec<WordEntry>,
    #[serde(default)]
    pub groups: Vec<GroupEntry>,
    #[serde(default)]
    pub pairs: Vec<PairEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedLexicon {
    pub lexicon: Lexicon,
    pub groups: Vec<WordGroup>,
    pub pairs: Vec<BipolarPair>,
}

impl LexiconFile {
    pub fn from_json(text: &str) -> Result<Self, LexiconError> {
        serde_json::from_str(text).map_err(|e| LexiconError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lexicon serializes")
    }

    /// Resolves the file into validated domain values, collecting every
    /// problem rather than stopping at the first one.
    pub fn resolve_all(&self) -> Result<LoadedLexicon, Vec<LexiconError>> {
        let mut errors = Vec::new();
        let mut lexicon = Lexicon::new();
        for entry in &self.words {
            if let Err(e) = lexicon.add_word(&entry.text, entry.source) {
                errors.push(e);
            }
        }

        let mut assignments = Vec::new();
        let mut representatives = Vec::new();
        for group in &self.groups {
            for member in &group.members {
                assignments.push((member.clone(), group.name.clone()));
            }
            if let Some(rep) = &group.representative {
                representatives.push((group.name.clone(), rep.clone()));
            }
        }
        let groups = lexicon
            .group_words(&assignments, &representatives)
            .unwrap_or_else(|e| {
                errors.push(e);
                Vec::new()
            });

        let mut pairs: Vec<BipolarPair> = Vec::new();
        for entry in &self.pairs {
            match lexicon.make_bipolar(&entry.positive, &entry.negative, entry.category) {
                Ok(pair) if pairs.iter().any(|p| same_word(p.word(), pair.word())) => errors.push(
                    LexiconError::Format(format!("pair `{}` declared twice", pair.word())),
                ),
                Ok(pair) => pairs.push(pair),
                Err(e) => errors.push(e),
            }
        }

        if errors.is_empty() {
            Ok(LoadedLexicon {
                lexicon,
                groups,
                pairs,
            })
        } else {
            Err(errors)
        }
    }

    pub fn resolve(&self) -> Result<LoadedLexicon, LexiconError> {
        self.resolve_all().map_err(|mut e| e.remove(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table_one_subset() -> Lexicon {
        let mut lex = Lexicon::new();
        for w in ["Reliable", "Secure", "Sustainable", "Speedy", "Responsive"] {
            lex.add_word(w, WordSource::Experts).unwrap();
        }
        for w in ["Innovative", "Bright", "Clear"] {
            lex.add_word(w, WordSource::RelatedStudies).unwrap();
        }
        lex
    }

    #[test]
    fn add_word_stores_entry() {
        let mut lex = Lexicon::new();
        lex.add_word("Reliable", WordSource::Experts).unwrap();
        assert_eq!(
            lex.words(),
            &[KanseiWord {
                text: "Reliable".into(),
                source: WordSource::Experts
            }]
        );
    }

    #[test]
    fn add_word_twice_is_idempotent() {
        let mut lex = Lexicon::new();
        lex.add_word("Reliable", WordSource::Experts).unwrap();
        lex.add_word("Reliable", WordSource::Experts).unwrap();
        lex.add_word("RELIABLE", WordSource::Literature).unwrap();
        assert_eq!(lex.len(), 1);
        assert_eq!(lex.words()[0].source, WordSource::Experts);
    }

    #[test]
    fn add_word_trims() {
        let mut lex = Lexicon::new();
        lex.add_word("  Bright ", WordSource::RelatedStudies)
            .unwrap();
        assert_eq!(lex.words()[0].text, "Bright");
    }

    #[test]
    fn blank_word_rejected() {
        let mut lex = Lexicon::new();
        assert_eq!(
            lex.add_word("   ", WordSource::Experts),
            Err(LexiconError::EmptyWord)
        );
        assert!(lex.is_empty());
    }

    #[test]
    fn groups_reliability_words() {
        let lex = table_one_subset();
        let groups = lex
            .group_words(
                &[
                    ("Reliable", "Reliability"),
                    ("Secure", "Reliability"),
                    ("Sustainable", "Reliability"),
                ],
                &[("Reliability", "Reliable")],
            )
            .unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].name, "Reliability");
        assert_eq!(groups[0].members.len(), 3);
        assert_eq!(groups[0].representative.text, "Reliable");
    }

    #[test]
    fn singleton_group_forces_representative() {
        let lex = table_one_subset();
        let groups = lex
            .group_words::<&str, &str>(&[("Responsive", "Responsiveness")], &[])
            .unwrap();
        assert_eq!(groups[0].representative.text, "Responsive");
    }

    #[test]
    fn representative_outside_group() {
        let lex = table_one_subset();
        let err = lex
            .group_words(
                &[("Reliable", "Reliability"), ("Secure", "Reliability")],
                &[("Reliability", "Speedy")],
            )
            .unwrap_err();
        assert!(matches!(err, LexiconError::RepresentativeNotInGroup { .. }));
    }

    #[test]
    fn unknown_and_duplicate_assignments() {
        let lex = table_one_subset();
        assert_eq!(
            lex.group_words::<&str, &str>(&[("Modern", "Innovation")], &[]),
            Err(LexiconError::UnknownWord("Modern".into()))
        );
        let err = lex
            .group_words::<&str, &str>(&[("Secure", "A"), ("secure", "B")], &[])
            .unwrap_err();
        assert!(matches!(err, LexiconError::DuplicateAssignment { .. }));
    }

    #[test]
    fn multi_member_group_needs_representative() {
        let lex = table_one_subset();
        let err = lex
            .group_words::<&str, &str>(&[("Secure", "A"), ("Reliable", "A")], &[])
            .unwrap_err();
        assert_eq!(err, LexiconError::MissingRepresentative("A".into()));
    }

    #[test]
    fn groups_keep_input_order() {
        let lex = table_one_subset();
        let groups = lex
            .group_words(
                &[("Bright", "Z"), ("Reliable", "A"), ("Clear", "Z")],
                &[("Z", "Clear")],
            )
            .unwrap();
        let names: Vec<_> = groups.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["Z", "A"]);
    }

    #[test]
    fn bipolar_pairs() {
        let lex = table_one_subset();
        let p = lex
            .make_bipolar("Innovative", "Unoriginal", GoldmanCategory::Novelty)
            .unwrap();
        assert_eq!(p.word(), "Innovative");
        assert_eq!(p.negative, "Unoriginal");
        assert_eq!(p.category, GoldmanCategory::Novelty);
        let p = lex
            .make_bipolar("Bright", "Dull", GoldmanCategory::Intensity)
            .unwrap();
        assert_eq!(p.category, GoldmanCategory::Intensity);
        assert_eq!(
            lex.make_bipolar("Clear", "", GoldmanCategory::Unity),
            Err(LexiconError::EmptyWord)
        );
        assert!(matches!(
            lex.make_bipolar("Clear", "clear", GoldmanCategory::Unity),
            Err(LexiconError::DegeneratePair(_))
        ));
    }

    #[test]
    fn unknown_category_rejected_by_parser() {
        let text = r#"{"words":[{"text":"Clear","source":"Experts"}],
            "pairs":[{"positive":"Clear","negative":"Obscure","category":"Harmony"}]}"#;
        assert!(matches!(
            LexiconFile::from_json(text),
            Err(LexiconError::Format(_))
        ));
    }

    #[test]
    fn resolve_collects_every_problem() {
        let file = LexiconFile {
            words: vec![
                WordEntry {
                    text: "Clear".into(),
                    source: WordSource::Experts,
                },
                WordEntry {
                    text: " ".into(),
                    source: WordSource::Experts,
                },
            ],
            groups: vec![GroupEntry {
                name: "X".into(),
                members: vec!["Nope".into()],
                representative: None,
            }],
            pairs: vec![PairEntry {
                positive: "Clear".into(),
                negative: "".into(),
                category: GoldmanCategory::Unity,
            }],
        };
        assert_eq!(file.resolve_all().unwrap_err().len(), 3);
    }

    fn category() -> impl Strategy<Value = GoldmanCategory> {
        (0usize..6).prop_map(|i| GoldmanCategory::ALL[i])
    }

    fn source() -> impl Strategy<Value = WordSource> {
        prop_oneof![
            Just(WordSource::Experts),
            Just(WordSource::ExperiencedUsers),
            Just(WordSource::RelatedStudies),
            Just(WordSource::IdeasVisions),
            Just(WordSource::Literature),
        ]
    }

    proptest! {
        #[test]
        fn pair_serde_round_trip(pos in "[A-Za-z]{1,12}", neg in "[a-z ]{0,4}[A-Za-z]{1,12}",
                                 cat in category(), src in source()) {
            let pair = BipolarPair {
                positive: KanseiWord { text: pos, source: src },
                negative: neg,
                category: cat,
            };
            let json = serde_json::to_string(&pair).unwrap();
            let back: BipolarPair = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, pair);
        }

        #[test]
        fn add_word_idempotent_under_case(word in "[A-Za-z]{1,10}", upper in any::<bool>()) {
            let mut lex = Lexicon::new();
            lex.add_word(&word, WordSource::Experts).unwrap();
            let again = if upper { word.to_uppercase() } else { word.to_lowercase() };
            lex.add_word(&again, WordSource::Literature).unwrap();
            prop_assert_eq!(lex.len(), 1);
            prop_assert_eq!(&lex.words()[0].text, &word);
        }

        #[test]
        fn groups_partition_assigned_words(groups_of in proptest::collection::vec(0usize..4, 1..12)) {
            let mut lex = Lexicon::new();
            let words: Vec<String> = (0..groups_of.len()).map(|i| format!("w{i}")).collect();
            for w in &words {
                lex.add_word(w, WordSource::Experts).unwrap();
            }
            let assignments: Vec<(String, String)> = words
                .iter()
                .zip(&groups_of)
                .map(|(w, g)| (w.clone(), format!("g{g}")))
                .collect();
            let mut reps: Vec<(String, String)> = Vec::new();
            for (w, g) in &assignments {
                if !reps.iter().any(|(rg, _)| rg == g) {
                    reps.push((g.clone(), w.clone()));
                }
            }
            let groups = lex.group_words(&assignments, &reps).unwrap();
            let mut seen: Vec<&str> = groups
                .iter()
                .flat_map(|g| g.members.iter().map(|m| m.text.as_str()))
                .collect();
            prop_assert_eq!(seen.len(), words.len());
            seen.sort();
            seen.dedup();
            prop_assert_eq!(seen.len(), words.len());
        }
    }
}
