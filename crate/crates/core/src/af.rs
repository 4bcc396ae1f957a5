//! Argumentation frameworks: arguments, attacks, parsing and structural queries.
//!
//! Arguments are identified internally by their position in declaration
//! order. Every algorithm in the crate iterates in this order, so output is
//! reproducible for a fixed input file.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Largest framework for which a dense power-set vector is materialized.
pub const MAX_POWERSET_ARGS: usize = 20;

/// Largest framework accepted by the labelling enumerator.
pub const MAX_ENUMERATION_ARGS: usize = 25;

/// Index of an argument inside its framework.
pub type ArgId = usize;

/// A Dung-style argumentation framework `(Args, ->)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentationFramework {
    names: Vec<String>,
    index: HashMap<String, ArgId>,
    attacks: Vec<(ArgId, ArgId)>,
    attackers: Vec<Vec<ArgId>>,
    attackees: Vec<Vec<ArgId>>,
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

impl ArgumentationFramework {
    /// Builds a framework from argument names and attacks given by name.
    ///
    /// Repeated attack pairs are collapsed into one.
    pub fn new<S: AsRef<str>>(arguments: &[S], attacks: &[(S, S)]) -> Result<Self> {
        let mut af = Self::empty();
        for name in arguments {
            af.push_argument(name.as_ref(), 0)?;
        }
        for (a, b) in attacks {
            let a = af.id(a.as_ref())?;
            let b = af.id(b.as_ref())?;
            af.push_attack(a, b);
        }
        Ok(af)
    }

    /// Builds a framework over `n` arguments named `a1 .. an` from index pairs.
    pub fn from_edges(n: usize, edges: &[(ArgId, ArgId)]) -> Self {
        let mut af = Self::empty();
        for i in 0..n {
            af.push_argument(&format!("a{}", i + 1), 0)
                .expect("generated names are unique");
        }
        for &(a, b) in edges {
            assert!(a < n && b < n, "edge ({a},{b}) out of range for {n} arguments");
            af.push_attack(a, b);
        }
        af
    }

    fn empty() -> Self {
        Self {
            names: Vec::new(),
            index: HashMap::new(),
            attacks: Vec::new(),
            attackers: Vec::new(),
            attackees: Vec::new(),
        }
    }

    fn push_argument(&mut self, name: &str, line: usize) -> Result<ArgId> {
        if !is_valid_name(name) {
            return Err(Error::MalformedLine {
                line,
                text: name.to_string(),
            });
        }
        if self.index.contains_key(name) {
            return Err(Error::DuplicateArgument(name.to_string()));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.attackers.push(Vec::new());
        self.attackees.push(Vec::new());
        Ok(id)
    }

    fn push_attack(&mut self, a: ArgId, b: ArgId) {
        if self.attackers[b].contains(&a) {
            return;
        }
        self.attacks.push((a, b));
        self.attackers[b].push(a);
        self.attackees[a].push(b);
    }

    /// Number of arguments.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: ArgId) -> &str {
        &self.names[id]
    }

    /// Looks up an argument by name.
    pub fn id(&self, name: &str) -> Result<ArgId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArgument(name.to_string()))
    }

    /// Attack pairs in declaration order.
    pub fn attacks(&self) -> &[(ArgId, ArgId)] {
        &self.attacks
    }

    pub fn attacks_pair(&self, a: ArgId, b: ArgId) -> bool {
        self.attackers[b].contains(&a)
    }

    /// Attackers of `a`, in declaration order of the attacks.
    pub fn attackers_of(&self, a: ArgId) -> &[ArgId] {
        &self.attackers[a]
    }

    /// Arguments attacked by `a`.
    pub fn attackees_of(&self, a: ArgId) -> &[ArgId] {
        &self.attackees[a]
    }

    /// Attackers of the argument called `name`, sorted in framework order.
    pub fn attackers(&self, name: &str) -> Result<Vec<&str>> {
        let id = self.id(name)?;
        let mut ids = self.attackers[id].clone();
        ids.sort_unstable();
        Ok(ids.into_iter().map(|i| self.name(i)).collect())
    }

    pub fn is_unattacked(&self, a: ArgId) -> bool {
        self.attackers[a].is_empty()
    }

    /// Names of the given arguments joined by single spaces.
    pub fn join_names<I: IntoIterator<Item = ArgId>>(&self, ids: I) -> String {
        ids.into_iter()
            .map(|i| self.name(i))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses the ASPARTIX format: `arg(x).` and `att(x,y).` statements,
    /// `%` comment lines. Several statements may share a line.
    pub fn parse_apx(text: &str) -> Result<Self> {
        let mut af = Self::empty();
        let mut pending: Vec<(String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('%') {
                continue;
            }
            let malformed = || Error::MalformedLine {
                line: line_no,
                text: raw.to_string(),
            };
            let mut rest = line;
            while !rest.is_empty() {
                let (kind, after) = if let Some(r) = rest.strip_prefix("arg") {
                    ("arg", r)
                } else if let Some(r) = rest.strip_prefix("att") {
                    ("att", r)
                } else {
                    return Err(malformed());
                };
                let after = after.trim_start().strip_prefix('(').ok_or_else(malformed)?;
                let close = after.find(')').ok_or_else(malformed)?;
                let inner = &after[..close];
                let after = after[close + 1..]
                    .trim_start()
                    .strip_prefix('.')
                    .ok_or_else(malformed)?;
                rest = after.trim_start();
                match kind {
                    "arg" => {
                        af.push_argument(inner.trim(), line_no)?;
                    }
                    _ => {
                        let mut parts = inner.split(',');
                        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next())
                        else {
                            return Err(malformed());
                        };
                        let (a, b) = (a.trim(), b.trim());
                        if !is_valid_name(a) || !is_valid_name(b) {
                            return Err(malformed());
                        }
                        pending.push((a.to_string(), b.to_string()));
                    }
                }
            }
        }
        for (a, b) in pending {
            let a = af.id(&a)?;
            let b = af.id(&b)?;
            af.push_attack(a, b);
        }
        Ok(af)
    }

    /// Parses trivial graph format: node lines, a `#` line, edge lines.
    /// Only the first token of a node line is used; edge labels are ignored.
    pub fn parse_tgf(text: &str) -> Result<Self> {
        if !text.lines().any(|l| l.trim() == "#") {
            return Err(Error::MissingSeparator);
        }
        let mut af = Self::empty();
        let mut lines = text.lines().enumerate();
        for (idx, raw) in lines.by_ref() {
            let line = raw.trim();
            if line == "#" {
                break;
            }
            if line.is_empty() {
                continue;
            }
            let node = line.split_whitespace().next().unwrap_or_default();
            af.push_argument(node, idx + 1)?;
        }
        for (idx, raw) in lines {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
                return Err(Error::MalformedLine {
                    line: idx + 1,
                    text: raw.to_string(),
                });
            };
            let a = af.id(a)?;
            let b = af.id(b)?;
            af.push_attack(a, b);
        }
        Ok(af)
    }

    /// Canonical APX serialization: all arguments, then all attacks.
    pub fn to_apx(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            let _ = writeln!(out, "arg({name}).");
        }
        for &(a, b) in &self.attacks {
            let _ = writeln!(out, "att({},{}).", self.names[a], self.names[b]);
        }
        out
    }

    /// Canonical TGF serialization.
    pub fn to_tgf(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            let _ = writeln!(out, "{name}");
        }
        out.push_str("#\n");
        for &(a, b) in &self.attacks {
            let _ = writeln!(out, "{} {}", self.names[a], self.names[b]);
        }
        out
    }

    /// Strongly connected components (Tarjan), each sorted, listed in order
    /// of their smallest member.
    pub fn strongly_connected_components(&self) -> Vec<Vec<ArgId>> {
        struct State<'a> {
            af: &'a ArgumentationFramework,
            counter: usize,
            index: Vec<Option<usize>>,
            low: Vec<usize>,
            on_stack: Vec<bool>,
            stack: Vec<ArgId>,
            out: Vec<Vec<ArgId>>,
        }

        // Iterative DFS; recursion depth would otherwise equal chain length.
        fn visit(st: &mut State<'_>, root: ArgId) {
            let mut work: Vec<(ArgId, usize)> = vec![(root, 0)];
            st.index[root] = Some(st.counter);
            st.low[root] = st.counter;
            st.counter += 1;
            st.stack.push(root);
            st.on_stack[root] = true;
            while let Some(&mut (v, ref mut next)) = work.last_mut() {
                let succ = st.af.attackees_of(v);
                if *next < succ.len() {
                    let w = succ[*next];
                    *next += 1;
                    match st.index[w] {
                        None => {
                            st.index[w] = Some(st.counter);
                            st.low[w] = st.counter;
                            st.counter += 1;
                            st.stack.push(w);
                            st.on_stack[w] = true;
                            work.push((w, 0));
                        }
                        Some(iw) if st.on_stack[w] => {
                            st.low[v] = st.low[v].min(iw);
                        }
                        Some(_) => {}
                    }
                } else {
                    work.pop();
                    if let Some(&(parent, _)) = work.last() {
                        st.low[parent] = st.low[parent].min(st.low[v]);
                    }
                    if Some(st.low[v]) == st.index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = st.stack.pop().expect("tarjan stack");
                            st.on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        st.out.push(comp);
                    }
                }
            }
        }

        let n = self.len();
        let mut st = State {
            af: self,
            counter: 0,
            index: vec![None; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            out: Vec::new(),
        };
        for v in 0..n {
            if st.index[v].is_none() {
                visit(&mut st, v);
            }
        }
        let mut out = st.out;
        out.sort_by_key(|c| c[0]);
        out
    }

    /// Weakly connected components, each sorted, in order of smallest member.
    pub fn weakly_connected_components(&self) -> Vec<Vec<ArgId>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &w in self.attackers[v].iter().chain(&self.attackees[v]) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// True iff some directed cycle has an odd number of distinct arguments.
    ///
    /// Inside a strongly connected component an odd simple cycle exists iff
    /// the component's edges cannot be 2-coloured, so each component is
    /// checked by a parity BFS over its internal edges.
    pub fn has_odd_cycle(&self) -> bool {
        self.odd_cycle_components().next().is_some()
    }

    /// Strongly connected components that contain an odd directed cycle.
    pub fn odd_cycle_components(&self) -> impl Iterator<Item = Vec<ArgId>> + '_ {
        let n = self.len();
        let sccs = self.strongly_connected_components();
        let mut which = vec![0usize; n];
        for (c, members) in sccs.iter().enumerate() {
            for &v in members {
                which[v] = c;
            }
        }
        sccs.into_iter().enumerate().filter_map(move |(c, members)| {
            let mut colour: HashMap<ArgId, bool> = HashMap::new();
            colour.insert(members[0], false);
            let mut queue = vec![members[0]];
            let mut i = 0;
            while i < queue.len() {
                let v = queue[i];
                i += 1;
                let cv = colour[&v];
                let neighbours = self.attackees[v].iter().chain(&self.attackers[v]);
                for &w in neighbours {
                    if which[w] != c {
                        continue;
                    }
                    match colour.get(&w) {
                        Some(&cw) if cw == cv => return Some(members),
                        Some(_) => {}
                        None => {
                            colour.insert(w, !cv);
                            queue.push(w);
                        }
                    }
                }
            }
            None
        })
    }
}
