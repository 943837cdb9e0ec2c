//! Morphisms between grammars over a common vocabulary.
//!
//! A morphism sends object generators to object sequences and arrow
//! generators to arrow generators so that domains and codomains commute; it
//! fixes every word and the start symbol. Applying one to a parse state
//! relabels the canonical structure.
//!
//! File format (line-based, `#` comments, all lines optional):
//!
//! ```text
//! object: x => y z          # cfg symbols; pregroup lines map basic types
//! arrow: s -> np vp => s -> np vp2
//! ```
//!
//! Unmapped objects default to themselves, unmapped arrows to the
//! same-named target generator.

use std::collections::BTreeMap;

use super::state::{ParseState, PregroupState, Structure, Tree, WordSlot};
use super::{GenId, Grammar, GrammarMode, Obj, PregroupType};
use crate::error::{EngineError, Result};

#[derive(Clone, Debug)]
pub struct GrammarMorphism {
    pub source: Grammar,
    pub target: Grammar,
    object_map: BTreeMap<Obj, Vec<Obj>>,
    arrow_map: Vec<GenId>,
}

fn invalid(message: impl Into<String>) -> EngineError {
    EngineError::InvalidMorphism(message.into())
}

impl GrammarMorphism {
    /// Builds and validates a morphism from explicit maps; anything absent
    /// falls back to the identity / name-match default.
    pub fn new(
        source: &Grammar,
        target: &Grammar,
        object_entries: &[(String, Vec<String>)],
        arrow_entries: &[(String, String)],
    ) -> Result<Self> {
        let src_words: std::collections::BTreeSet<_> = source.vocabulary().iter().collect();
        let dst_words: std::collections::BTreeSet<_> = target.vocabulary().iter().collect();
        if src_words != dst_words {
            return Err(EngineError::VocabularyMismatch(format!(
                "morphisms require a common vocabulary ({} vs {} words)",
                src_words.len(),
                dst_words.len()
            )));
        }
        if source.start != target.start {
            return Err(invalid(format!(
                "start symbols differ: `{}` vs `{}`",
                source.start, target.start
            )));
        }
        if source.mode != target.mode {
            return Err(invalid("source and target grammar modes differ"));
        }

        // Object map over all source objects, defaulting to the identity.
        let mut object_map: BTreeMap<Obj, Vec<Obj>> = BTreeMap::new();
        match source.mode {
            GrammarMode::Cfg => {
                let mut explicit: BTreeMap<String, Vec<String>> = BTreeMap::new();
                for (from, to) in object_entries {
                    explicit.insert(from.clone(), to.clone());
                }
                for obj in &source.signature().objects {
                    let image = match obj {
                        Obj::Word(w) => vec![Obj::Word(w.clone())],
                        Obj::Nt(x) => match explicit.get(x) {
                            Some(syms) => syms
                                .iter()
                                .map(|s| {
                                    if target.nonterminals.contains(s) {
                                        Obj::Nt(s.clone())
                                    } else {
                                        Obj::Word(s.clone())
                                    }
                                })
                                .collect(),
                            None => vec![Obj::Nt(x.clone())],
                        },
                        Obj::Typed(_) => unreachable!("typed object in cfg grammar"),
                    };
                    object_map.insert(obj.clone(), image);
                }
            }
            GrammarMode::Pregroup => {
                // Pregroup object lines map basic types uniformly across
                // adjoint orders: `object: n => m`.
                let mut base_map: BTreeMap<String, String> = BTreeMap::new();
                for (from, to) in object_entries {
                    if to.len() != 1 {
                        return Err(invalid(format!(
                            "pregroup type `{from}` must map to a single basic type"
                        )));
                    }
                    base_map.insert(from.clone(), to[0].clone());
                }
                for obj in &source.signature().objects {
                    let image = match obj {
                        Obj::Word(w) => vec![Obj::Word(w.clone())],
                        Obj::Typed(t) => {
                            let base = base_map
                                .get(&t.base)
                                .cloned()
                                .unwrap_or_else(|| t.base.clone());
                            vec![Obj::Typed(PregroupType::new(base, t.order))]
                        }
                        Obj::Nt(_) => unreachable!("nonterminal in pregroup grammar"),
                    };
                    object_map.insert(obj.clone(), image);
                }
            }
        }

        for (obj, image) in &object_map {
            for o in image {
                if !target.signature().objects.contains(o) {
                    return Err(invalid(format!(
                        "object `{obj}` maps onto `{o}`, which the target lacks"
                    )));
                }
            }
        }
        let start_image = object_map
            .get(&source.start_obj())
            .cloned()
            .unwrap_or_default();
        if start_image != vec![target.start_obj()] {
            return Err(invalid(
                "the start symbol must map to the target start symbol",
            ));
        }

        // Arrow map, defaulting to the same-named target generator.
        let mut explicit_arrows: BTreeMap<String, String> = BTreeMap::new();
        for (from, to) in arrow_entries {
            explicit_arrows.insert(from.clone(), to.clone());
        }
        let mut arrow_map = Vec::with_capacity(source.signature().len());
        for (_, gen) in source.signature().generators() {
            let target_name = explicit_arrows.get(&gen.name).unwrap_or(&gen.name);
            let image = target.signature().by_name(target_name).ok_or_else(|| {
                invalid(format!(
                    "arrow `{}` maps to `{target_name}`, which the target lacks",
                    gen.name
                ))
            })?;
            arrow_map.push(image);
        }

        let m = GrammarMorphism {
            source: source.clone(),
            target: target.clone(),
            object_map,
            arrow_map,
        };

        // Domain and codomain squares must commute for every generator.
        for (id, gen) in m.source.signature().generators() {
            let image = m.target.signature().generator(m.arrow_gen(id));
            if m.map_objects(&gen.dom)? != image.dom {
                return Err(invalid(format!(
                    "domain square fails for `{}` -> `{}`",
                    gen.name, image.name
                )));
            }
            if m.map_objects(&gen.cod)? != image.cod {
                return Err(invalid(format!(
                    "codomain square fails for `{}` -> `{}`",
                    gen.name, image.name
                )));
            }
        }
        Ok(m)
    }

    pub fn identity(g: &Grammar) -> Result<Self> {
        GrammarMorphism::new(g, g, &[], &[])
    }

    pub fn arrow_gen(&self, id: GenId) -> GenId {
        self.arrow_map[id.0]
    }

    pub fn map_object(&self, obj: &Obj) -> Result<&[Obj]> {
        self.object_map
            .get(obj)
            .map(|v| v.as_slice())
            .ok_or_else(|| invalid(format!("object `{obj}` is not in the source signature")))
    }

    /// The monoid-homomorphism extension of the object map.
    pub fn map_objects(&self, objs: &[Obj]) -> Result<Vec<Obj>> {
        let mut out = Vec::new();
        for obj in objs {
            out.extend_from_slice(self.map_object(obj)?);
        }
        Ok(out)
    }

    /// Relabels a source parse state into the target grammar.
    pub fn apply_state(&self, p: &ParseState) -> Result<ParseState> {
        let structure = match &p.structure {
            Structure::Forest(trees) => {
                let mut mapped = Vec::new();
                for t in trees {
                    mapped.extend(self.map_tree(t)?);
                }
                Structure::Forest(mapped)
            }
            Structure::Pregroup(st) => {
                let mut choices = Vec::with_capacity(st.choices.len());
                for choice in &st.choices {
                    choices.push(match choice {
                        WordSlot::Bare => WordSlot::Bare,
                        WordSlot::Entry(gen) => WordSlot::Entry(self.arrow_gen(*gen)),
                    });
                }
                let mut links = std::collections::BTreeSet::new();
                for (a, b) in &st.links {
                    links.insert((self.map_slot(st, *a)?, self.map_slot(st, *b)?));
                }
                Structure::Pregroup(PregroupState { choices, links })
            }
        };
        Ok(ParseState {
            prefix: p.prefix.clone(),
            structure,
        })
    }

    fn map_tree(&self, tree: &Tree) -> Result<Vec<Tree>> {
        match tree {
            Tree::Leaf(obj) => Ok(self
                .map_object(obj)?
                .iter()
                .cloned()
                .map(Tree::Leaf)
                .collect()),
            Tree::Node { gen, children } => {
                let mut mapped_children = Vec::new();
                for c in children {
                    mapped_children.extend(self.map_tree(c)?);
                }
                Ok(vec![Tree::Node {
                    gen: self.arrow_gen(*gen),
                    children: mapped_children,
                }])
            }
        }
    }

    /// Maps a link endpoint. Each slot of a lexicon codomain maps to the
    /// offset where its image starts; a linked slot must map to exactly one
    /// target slot.
    fn map_slot(&self, st: &PregroupState, (w, t): (usize, usize)) -> Result<(usize, usize)> {
        let gen = match &st.choices[w] {
            WordSlot::Entry(g) => *g,
            WordSlot::Bare => return Err(invalid("link endpoint on a bare word")),
        };
        let cod = &self.source.signature().generator(gen).cod;
        let mut offset = 0usize;
        for obj in cod.iter().take(t) {
            offset += self.map_object(obj)?.len();
        }
        if self.map_object(&cod[t])?.len() != 1 {
            return Err(invalid(format!(
                "linked type `{}` does not map to a single type",
                cod[t]
            )));
        }
        Ok((w, offset))
    }
}

/// Parses the morphism file format against a source and target grammar.
pub fn load_morphism(text: &str, source: &Grammar, target: &Grammar) -> Result<GrammarMorphism> {
    let mut object_entries = Vec::new();
    let mut arrow_entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or(EngineError::Syntax {
            line: number,
            message: "expected `object:` or `arrow:`".to_string(),
        })?;
        let rest = rest.trim();
        let (from, to) = rest.split_once("=>").ok_or(EngineError::Syntax {
            line: number,
            message: "expected `from => to`".to_string(),
        })?;
        let from = from.trim().to_string();
        let to = to.trim();
        match key.trim() {
            "object" => {
                object_entries.push((from, to.split_whitespace().map(|s| s.to_string()).collect()));
            }
            "arrow" => arrow_entries.push((from, to.to_string())),
            other => {
                return Err(EngineError::Syntax {
                    line: number,
                    message: format!("unknown morphism declaration `{other}`"),
                })
            }
        }
    }
    GrammarMorphism::new(source, target, &object_entries, &arrow_entries)
}
