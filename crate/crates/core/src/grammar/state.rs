//! Parse states and their canonical operations.
//!
//! A parse state is the canonical form of an arrow from a word sequence to
//! its current codomain. CFG states are ordered derivation forests; pregroup
//! states are the lexicon choice per word plus a planar set of contraction
//! links. Two states are equal exactly when these canonical structures are
//! equal, so applying independent generators in either order produces the
//! same value.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use super::{GenId, GenKind, Grammar, GrammarMode, Obj};
use crate::error::{EngineError, Result};

/// One derivation tree: leaves are objects (words, in any reachable state),
/// internal nodes are generator applications whose children line up with the
/// generator's domain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(Obj),
    Node { gen: GenId, children: Vec<Tree> },
}

impl Tree {
    pub fn leaves<'a>(&'a self, out: &mut Vec<&'a Obj>) {
        match self {
            Tree::Leaf(obj) => out.push(obj),
            Tree::Node { children, .. } => {
                for c in children {
                    c.leaves(out);
                }
            }
        }
    }

    fn count_gens(&self, bag: &mut BTreeMap<GenId, usize>) {
        if let Tree::Node { gen, children } = self {
            *bag.entry(*gen).or_insert(0) += 1;
            for c in children {
                c.count_gens(bag);
            }
        }
    }
}

/// Lexicon choice for one word of the prefix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WordSlot {
    /// The bare word object, not yet sent through the lexicon.
    Bare,
    /// The lexicon generator chosen for this word.
    Entry(GenId),
}

/// Slots are addressed as (word index, type index) so that lexicalising one
/// word never shifts another word's link endpoints.
pub type SlotId = (usize, usize);

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PregroupState {
    pub choices: Vec<WordSlot>,
    /// Contraction links; each joins a contractible pair whose in-between
    /// slots are all linked (planarity is then automatic).
    pub links: BTreeSet<(SlotId, SlotId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Structure {
    Forest(Vec<Tree>),
    Pregroup(PregroupState),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParseState {
    pub prefix: Vec<String>,
    pub structure: Structure,
}

/// A flattened pregroup slot.
pub(crate) struct Slot {
    pub id: SlotId,
    pub obj: Obj,
    pub linked: bool,
}

impl Grammar {
    pub fn initial_state(&self) -> ParseState {
        let structure = match self.mode {
            GrammarMode::Cfg => Structure::Forest(Vec::new()),
            GrammarMode::Pregroup => Structure::Pregroup(PregroupState::default()),
        };
        ParseState {
            prefix: Vec::new(),
            structure,
        }
    }

    pub fn append_word(&self, p: &ParseState, word: &str) -> Result<ParseState> {
        if !self.contains_word(word) {
            return Err(EngineError::UnknownWord(word.to_string()));
        }
        let mut next = p.clone();
        next.prefix.push(word.to_string());
        match &mut next.structure {
            Structure::Forest(trees) => trees.push(Tree::Leaf(Obj::Word(word.to_string()))),
            Structure::Pregroup(st) => st.choices.push(WordSlot::Bare),
        }
        Ok(next)
    }

    /// Every slot of a pregroup state in left-to-right order.
    pub(crate) fn slots(&self, prefix: &[String], st: &PregroupState) -> Vec<Slot> {
        let linked: BTreeSet<SlotId> = st.links.iter().flat_map(|(a, b)| [*a, *b]).collect();
        let mut out = Vec::new();
        for (w, choice) in st.choices.iter().enumerate() {
            match choice {
                WordSlot::Bare => out.push(Slot {
                    id: (w, 0),
                    obj: Obj::Word(prefix[w].clone()),
                    linked: false,
                }),
                WordSlot::Entry(gen) => {
                    for (t, obj) in self.signature().generator(*gen).cod.iter().enumerate() {
                        out.push(Slot {
                            id: (w, t),
                            obj: obj.clone(),
                            linked: linked.contains(&(w, t)),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn codomain(&self, p: &ParseState) -> Vec<Obj> {
        match &p.structure {
            Structure::Forest(trees) => trees.iter().map(|t| self.tree_root(t)).collect(),
            Structure::Pregroup(st) => self
                .slots(&p.prefix, st)
                .into_iter()
                .filter(|s| !s.linked)
                .map(|s| s.obj)
                .collect(),
        }
    }

    pub fn tree_root(&self, tree: &Tree) -> Obj {
        match tree {
            Tree::Leaf(obj) => obj.clone(),
            Tree::Node { gen, .. } => self.signature().generator(*gen).cod[0].clone(),
        }
    }

    pub fn is_parsing(&self, p: &ParseState) -> bool {
        self.codomain(p) == [self.start_obj()]
    }

    /// All `(generator, position)` pairs whose domain matches a contiguous
    /// window of the codomain, sorted by position then declaration order.
    pub fn applicable_generators(&self, p: &ParseState) -> Vec<(GenId, usize)> {
        let mut out = Vec::new();
        match &p.structure {
            Structure::Forest(trees) => {
                let roots: Vec<Obj> = trees.iter().map(|t| self.tree_root(t)).collect();
                for pos in 0..roots.len() {
                    for (id, gen) in self.signature().generators() {
                        let k = gen.dom.len();
                        if pos + k <= roots.len() && gen.dom[..] == roots[pos..pos + k] {
                            out.push((id, pos));
                        }
                    }
                }
            }
            Structure::Pregroup(st) => {
                let slots: Vec<Slot> = self
                    .slots(&p.prefix, st)
                    .into_iter()
                    .filter(|s| !s.linked)
                    .collect();
                for pos in 0..slots.len() {
                    for (id, gen) in self.signature().generators() {
                        match gen.kind {
                            GenKind::Lexicon => {
                                if gen.dom[0] == slots[pos].obj {
                                    out.push((id, pos));
                                }
                            }
                            GenKind::Cup => {
                                if pos + 1 < slots.len()
                                    && gen.dom[0] == slots[pos].obj
                                    && gen.dom[1] == slots[pos + 1].obj
                                {
                                    out.push((id, pos));
                                }
                            }
                            GenKind::Rule => {}
                        }
                    }
                }
            }
        }
        out
    }

    /// The canonical form of `(id ⊗ g ⊗ id) ∘ p` with `g`'s domain matched at
    /// codomain position `pos`.
    pub fn apply_generator(&self, p: &ParseState, gen: GenId, pos: usize) -> Result<ParseState> {
        let g = self.signature().generator(gen);
        let fail = || EngineError::InapplicableGenerator {
            generator: g.name.clone(),
            position: pos,
        };
        let mut next = p.clone();
        match &mut next.structure {
            Structure::Forest(trees) => {
                if g.kind != GenKind::Rule {
                    return Err(fail());
                }
                let k = g.dom.len();
                if pos + k > trees.len() {
                    return Err(fail());
                }
                for (i, dom_obj) in g.dom.iter().enumerate() {
                    if self.tree_root(&trees[pos + i]) != *dom_obj {
                        return Err(fail());
                    }
                }
                let children: Vec<Tree> = trees.splice(pos..pos + k, std::iter::empty()).collect();
                trees.insert(pos, Tree::Node { gen, children });
            }
            Structure::Pregroup(st) => {
                let slots: Vec<Slot> = self
                    .slots(&p.prefix, st)
                    .into_iter()
                    .filter(|s| !s.linked)
                    .collect();
                match g.kind {
                    GenKind::Lexicon => {
                        if pos >= slots.len() || slots[pos].obj != g.dom[0] {
                            return Err(fail());
                        }
                        let (w, _) = slots[pos].id;
                        if st.choices[w] != WordSlot::Bare {
                            return Err(fail());
                        }
                        st.choices[w] = WordSlot::Entry(gen);
                    }
                    GenKind::Cup => {
                        if pos + 1 >= slots.len()
                            || slots[pos].obj != g.dom[0]
                            || slots[pos + 1].obj != g.dom[1]
                        {
                            return Err(fail());
                        }
                        st.links.insert((slots[pos].id, slots[pos + 1].id));
                    }
                    GenKind::Rule => return Err(fail()),
                }
            }
        }
        Ok(next)
    }

    /// All states reachable from `from` by at most `depth_bound` generator
    /// applications. Errors if an unseen state is discovered at the bound,
    /// i.e. the closure may still be growing.
    pub fn closure(&self, from: &ParseState, depth_bound: usize) -> Result<BTreeSet<ParseState>> {
        self.closure_multi(std::iter::once(from.clone()), depth_bound)
    }

    pub(crate) fn closure_multi(
        &self,
        seeds: impl IntoIterator<Item = ParseState>,
        depth_bound: usize,
    ) -> Result<BTreeSet<ParseState>> {
        let mut visited = BTreeSet::new();
        let mut queue = VecDeque::new();
        for seed in seeds {
            if visited.insert(seed.clone()) {
                queue.push_back((seed, 0usize));
            }
        }
        while let Some((state, depth)) = queue.pop_front() {
            for (gen, pos) in self.applicable_generators(&state) {
                let next = self.apply_generator(&state, gen, pos)?;
                if !visited.contains(&next) {
                    if depth >= depth_bound {
                        return Err(EngineError::DepthBoundExceeded { bound: depth_bound });
                    }
                    visited.insert(next.clone());
                    queue.push_back((next, depth + 1));
                }
            }
        }
        Ok(visited)
    }

    /// The state with every word of `sentence` appended and nothing applied.
    pub fn bare_state(&self, sentence: &[String]) -> Result<ParseState> {
        let mut state = self.initial_state();
        for w in sentence {
            state = self.append_word(&state, w)?;
        }
        Ok(state)
    }

    /// All distinct parsings of `sentence` reachable within `depth_bound`
    /// generator applications.
    pub fn enumerate_parsings(
        &self,
        sentence: &[String],
        depth_bound: usize,
    ) -> Result<BTreeSet<ParseState>> {
        let bare = self.bare_state(sentence)?;
        let states = self.closure(&bare, depth_bound)?;
        Ok(states.into_iter().filter(|s| self.is_parsing(s)).collect())
    }

    /// Brute-force language listing up to `max_len`, sorted by length then
    /// by word sequence.
    pub fn language(&self, max_len: usize, depth_bound: usize) -> Result<Vec<Vec<String>>> {
        let mut out = Vec::new();
        for n in 0..=max_len {
            let mut level = Vec::new();
            let mut stack = vec![Vec::new()];
            while let Some(sentence) = stack.pop() {
                if sentence.len() == n {
                    if !self.enumerate_parsings(&sentence, depth_bound)?.is_empty() {
                        level.push(sentence);
                    }
                    continue;
                }
                for w in self.vocabulary().iter().rev() {
                    let mut next = sentence.clone();
                    next.push(w.clone());
                    stack.push(next);
                }
            }
            level.sort();
            out.extend(level);
        }
        Ok(out)
    }

    /// Occurrence counts of every generator in the state's structure.
    pub fn generator_bag(&self, p: &ParseState) -> BTreeMap<GenId, usize> {
        let mut bag = BTreeMap::new();
        match &p.structure {
            Structure::Forest(trees) => {
                for t in trees {
                    t.count_gens(&mut bag);
                }
            }
            Structure::Pregroup(st) => {
                for choice in &st.choices {
                    if let WordSlot::Entry(gen) = choice {
                        *bag.entry(*gen).or_insert(0) += 1;
                    }
                }
                for (left, _) in &st.links {
                    let gen = match &st.choices[left.0] {
                        WordSlot::Entry(e) => match &self.signature().generator(*e).cod[left.1] {
                            Obj::Typed(t) => {
                                self.signature().cup_for(t).expect("linked type has a cup")
                            }
                            other => unreachable!("link on non-typed slot {other}"),
                        },
                        WordSlot::Bare => unreachable!("link on bare word"),
                    };
                    *bag.entry(gen).or_insert(0) += 1;
                }
            }
        }
        bag
    }

    // ------------------------------------------------------------------
    // Canonical strings
    // ------------------------------------------------------------------

    /// Canonical display form: fully parenthesised forests for CFG states
    /// (`s(np(Complex) vp(tv(houses) np(students)))`), per-word lexicon
    /// types plus flat link index pairs for pregroup states
    /// (`Alice[n] loves[n^r s n^l] Bob[n] {(0,1),(3,4)}`).
    pub fn state_to_string(&self, p: &ParseState) -> String {
        match &p.structure {
            Structure::Forest(trees) => {
                let mut parts = Vec::new();
                for t in trees {
                    parts.push(self.tree_to_string(t));
                }
                parts.join(" ")
            }
            Structure::Pregroup(st) => {
                let mut parts = Vec::new();
                for (w, choice) in st.choices.iter().enumerate() {
                    match choice {
                        WordSlot::Bare => parts.push(p.prefix[w].clone()),
                        WordSlot::Entry(gen) => {
                            let types = self
                                .signature()
                                .generator(*gen)
                                .cod
                                .iter()
                                .map(|o| o.to_string())
                                .collect::<Vec<_>>()
                                .join(" ");
                            parts.push(format!("{}[{}]", p.prefix[w], types));
                        }
                    }
                }
                if !st.links.is_empty() {
                    let flat = self.flat_positions(&p.prefix, st);
                    let mut rendered = String::from("{");
                    for (i, (a, b)) in st.links.iter().enumerate() {
                        if i > 0 {
                            rendered.push(',');
                        }
                        let _ = write!(rendered, "({},{})", flat[a], flat[b]);
                    }
                    rendered.push('}');
                    parts.push(rendered);
                }
                parts.join(" ")
            }
        }
    }

    fn tree_to_string(&self, tree: &Tree) -> String {
        match tree {
            Tree::Leaf(obj) => obj.to_string(),
            Tree::Node { gen, children } => {
                let root = self.signature().generator(*gen).cod[0].to_string();
                let inner = children
                    .iter()
                    .map(|c| self.tree_to_string(c))
                    .collect::<Vec<_>>()
                    .join(" ");
                format!("{root}({inner})")
            }
        }
    }

    fn flat_positions(&self, prefix: &[String], st: &PregroupState) -> BTreeMap<SlotId, usize> {
        self.slots(prefix, st)
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s.id, i))
            .collect()
    }

    /// Parses the canonical string form back into a state of this grammar,
    /// validating the structure along the way.
    pub fn state_from_str(&self, text: &str) -> Result<ParseState> {
        match self.mode {
            GrammarMode::Cfg => self.cfg_state_from_str(text),
            GrammarMode::Pregroup => self.pregroup_state_from_str(text),
        }
    }

    fn cfg_state_from_str(&self, text: &str) -> Result<ParseState> {
        let bad = |message: &str| EngineError::StateSyntax {
            text: text.to_string(),
            message: message.to_string(),
        };
        let mut tokens = Vec::new();
        let mut cur = String::new();
        for c in text.chars() {
            match c {
                '(' | ')' => {
                    if !cur.is_empty() {
                        tokens.push(std::mem::take(&mut cur));
                    }
                    tokens.push(c.to_string());
                }
                c if c.is_whitespace() => {
                    if !cur.is_empty() {
                        tokens.push(std::mem::take(&mut cur));
                    }
                }
                c => cur.push(c),
            }
        }
        if !cur.is_empty() {
            tokens.push(cur);
        }

        fn parse_term(g: &Grammar, tokens: &[String], i: &mut usize, text: &str) -> Result<Tree> {
            let bad = |message: String| EngineError::StateSyntax {
                text: text.to_string(),
                message,
            };
            let sym = tokens
                .get(*i)
                .ok_or_else(|| bad("unexpected end of input".into()))?
                .clone();
            if sym == "(" || sym == ")" {
                return Err(bad(format!("unexpected `{sym}`")));
            }
            *i += 1;
            if tokens.get(*i).map(String::as_str) == Some("(") {
                *i += 1;
                let mut children = Vec::new();
                while tokens.get(*i).map(String::as_str) != Some(")") {
                    children.push(parse_term(g, tokens, i, text)?);
                }
                *i += 1; // consume `)`
                let roots: Vec<String> = children
                    .iter()
                    .map(|c| g.tree_root(c).to_string())
                    .collect();
                let name = format!("{} -> {}", sym, roots.join(" "));
                let gen = g
                    .signature()
                    .by_name(&name)
                    .ok_or_else(|| bad(format!("no production matches `{name}`")))?;
                Ok(Tree::Node { gen, children })
            } else if g.contains_word(&sym) {
                Ok(Tree::Leaf(Obj::Word(sym)))
            } else {
                Err(bad(format!(
                    "`{sym}` is neither a word nor a derivation node"
                )))
            }
        }

        let mut trees = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            trees.push(parse_term(self, &tokens, &mut i, text)?);
        }
        let mut prefix = Vec::new();
        for t in &trees {
            let mut leaves = Vec::new();
            t.leaves(&mut leaves);
            for obj in leaves {
                match obj {
                    Obj::Word(w) => prefix.push(w.clone()),
                    other => {
                        return Err(bad(&format!("leaf `{other}` is not a word")));
                    }
                }
            }
        }
        Ok(ParseState {
            prefix,
            structure: Structure::Forest(trees),
        })
    }

    fn pregroup_state_from_str(&self, text: &str) -> Result<ParseState> {
        let bad = |message: String| EngineError::StateSyntax {
            text: text.to_string(),
            message,
        };
        // Chunk on whitespace outside [] and {}.
        let mut chunks: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut depth = 0i32;
        for c in text.chars() {
            match c {
                '[' | '{' => {
                    depth += 1;
                    cur.push(c);
                }
                ']' | '}' => {
                    depth -= 1;
                    cur.push(c);
                }
                c if c.is_whitespace() && depth == 0 => {
                    if !cur.is_empty() {
                        chunks.push(std::mem::take(&mut cur));
                    }
                }
                c => cur.push(c),
            }
        }
        if !cur.is_empty() {
            chunks.push(cur);
        }

        let mut prefix = Vec::new();
        let mut choices = Vec::new();
        let mut link_chunk: Option<String> = None;
        for chunk in chunks {
            if chunk.starts_with('{') {
                if link_chunk.is_some() {
                    return Err(bad("more than one link set".into()));
                }
                link_chunk = Some(chunk);
                continue;
            }
            if link_chunk.is_some() {
                return Err(bad("links must come last".into()));
            }
            if let Some((word, rest)) = chunk.split_once('[') {
                let types = rest
                    .strip_suffix(']')
                    .ok_or_else(|| bad(format!("unterminated `[` in `{chunk}`")))?;
                let name = format!(
                    "{} : {}",
                    word,
                    types.split_whitespace().collect::<Vec<_>>().join(" ")
                );
                let gen = self
                    .signature()
                    .by_name(&name)
                    .ok_or_else(|| bad(format!("no lexicon entry matches `{name}`")))?;
                prefix.push(word.to_string());
                choices.push(WordSlot::Entry(gen));
            } else {
                if !self.contains_word(&chunk) {
                    return Err(bad(format!("`{chunk}` is not a vocabulary word")));
                }
                prefix.push(chunk);
                choices.push(WordSlot::Bare);
            }
        }

        let mut state = ParseState {
            prefix,
            structure: Structure::Pregroup(PregroupState {
                choices,
                links: BTreeSet::new(),
            }),
        };

        let Some(link_chunk) = link_chunk else {
            return Ok(state);
        };
        let body = link_chunk
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| bad("malformed link set".into()))?;
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for part in body.split("),").filter(|s| !s.trim().is_empty()) {
            let pair = part.trim().trim_start_matches('(').trim_end_matches(')');
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| bad(format!("malformed link `{part}`")))?;
            let a: usize = a
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad index `{a}`")))?;
            let b: usize = b
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad index `{b}`")))?;
            pairs.push((a, b));
        }

        // Replay links innermost-first through apply_generator so every
        // contraction is validated exactly like a live application.
        let flat_ids: Vec<SlotId> = match &state.structure {
            Structure::Pregroup(st) => self.slots(&state.prefix, st).iter().map(|s| s.id).collect(),
            _ => unreachable!(),
        };
        pairs.sort_by_key(|(a, b)| (b.saturating_sub(*a), *a));
        for (a, b) in pairs {
            let (ida, idb) = match (flat_ids.get(a), flat_ids.get(b)) {
                (Some(x), Some(y)) => (*x, *y),
                _ => return Err(bad(format!("link index out of range: ({a},{b})"))),
            };
            let st = match &state.structure {
                Structure::Pregroup(st) => st,
                _ => unreachable!(),
            };
            let unlinked: Vec<Slot> = self
                .slots(&state.prefix, st)
                .into_iter()
                .filter(|s| !s.linked)
                .collect();
            let pos = unlinked
                .iter()
                .position(|s| s.id == ida)
                .ok_or_else(|| bad(format!("slot {a} is already linked")))?;
            if unlinked.get(pos + 1).map(|s| s.id) != Some(idb) {
                return Err(bad(format!("link ({a},{b}) is not contractible here")));
            }
            let left = match &unlinked[pos].obj {
                Obj::Typed(t) => t.clone(),
                other => return Err(bad(format!("slot {a} has non-type `{other}`"))),
            };
            let cup = self
                .signature()
                .cup_for(&left)
                .ok_or_else(|| bad(format!("no cup contracts `{left}`")))?;
            state = self.apply_generator(&state, cup, pos)?;
        }
        Ok(state)
    }
}
