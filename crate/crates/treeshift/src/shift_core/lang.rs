//! Language recognizers for shift presentations.
//!
//! Every finite presentation is turned into an automaton whose states all
//! have an infinite forward continuation, so "some run exists" coincides with
//! "the word occurs in a point". Regular languages are then determinized.

use std::collections::{BTreeMap, HashMap};

use super::{Alphabet, BdProfile, ShiftSpec, Symbol, Word, WordSftSpec};
use crate::error::{resource, Result};

const MAX_DFA_STATES: usize = 1 << 16;

/// Deterministic automaton; every state is accepting, `None` means dead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub n_symbols: usize,
    pub start: Option<u32>,
    table: Vec<Option<u32>>,
}

impl Dfa {
    pub fn n_states(&self) -> usize {
        self.table.len() / self.n_symbols
    }

    pub fn step(&self, q: u32, a: Symbol) -> Option<u32> {
        self.table[q as usize * self.n_symbols + a as usize]
    }

    pub fn run(&self, w: &[Symbol]) -> Option<u32> {
        let mut q = self.start?;
        for &a in w {
            q = self.step(q, a)?;
        }
        Some(q)
    }
}

struct Nfa {
    n_symbols: usize,
    initial: Vec<usize>,
    trans: Vec<Vec<(Symbol, usize)>>,
}

impl Nfa {
    /// Drops states with no infinite forward path.
    fn prune(&mut self) {
        let n = self.trans.len();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for q in 0..n {
                if alive[q] && !self.trans[q].iter().any(|&(_, r)| alive[r]) {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for t in &mut self.trans {
            t.retain(|&(_, r)| alive[r]);
        }
        self.initial.retain(|&q| alive[q]);
    }

    fn determinize(&self) -> Result<Dfa> {
        let d = self.n_symbols;
        let mut start: Vec<usize> = self.initial.clone();
        start.sort_unstable();
        start.dedup();
        if start.is_empty() {
            return Ok(Dfa {
                n_symbols: d,
                start: None,
                table: Vec::new(),
            });
        }
        let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut sets = vec![start.clone()];
        ids.insert(start, 0);
        let mut table = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            for a in 0..d as Symbol {
                let mut next: Vec<usize> = sets[i]
                    .iter()
                    .flat_map(|&q| self.trans[q].iter().filter(|(b, _)| *b == a).map(|&(_, r)| r))
                    .collect();
                next.sort_unstable();
                next.dedup();
                if next.is_empty() {
                    table.push(None);
                    continue;
                }
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        if sets.len() >= MAX_DFA_STATES {
                            return resource("determinized states", MAX_DFA_STATES as u64);
                        }
                        let id = sets.len() as u32;
                        ids.insert(next.clone(), id);
                        sets.push(next);
                        id
                    }
                };
                table.push(Some(id));
            }
            i += 1;
        }
        Ok(Dfa {
            n_symbols: d,
            start: Some(0),
            table,
        })
    }
}

fn sft_nfa(s: &WordSftSpec) -> Result<Nfa> {
    let d = s.alphabet.len();
    let limit = 1usize << 16;
    // States are the last min(len, m-1) symbols read.
    let mut ids: BTreeMap<Word, usize> = BTreeMap::new();
    let mut words: Vec<Word> = vec![Vec::new()];
    ids.insert(Vec::new(), 0);
    let mut trans: Vec<Vec<(Symbol, usize)>> = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let cur = words[i].clone();
        let mut out = Vec::new();
        for a in 0..d as Symbol {
            let mut ext = cur.clone();
            ext.push(a);
            if ext.len() == s.m {
                if s.forbidden.contains(&ext) {
                    continue;
                }
                ext.remove(0);
            }
            let id = match ids.get(&ext) {
                Some(&id) => id,
                None => {
                    if words.len() >= limit {
                        return resource("SFT automaton states", limit as u64);
                    }
                    ids.insert(ext.clone(), words.len());
                    words.push(ext);
                    words.len() - 1
                }
            };
            out.push((a, id));
        }
        trans.push(out);
        i += 1;
    }
    Ok(Nfa {
        n_symbols: d,
        initial: vec![0],
        trans,
    })
}

/// A recognizer for the language of a shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Language {
    Regular { alphabet: Alphabet, dfa: Dfa },
    Density(BdProfile),
}

/// Position of an incremental reader.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cursor {
    State(u32),
    History(Vec<Symbol>),
}

impl Language {
    pub fn compile(spec: &ShiftSpec) -> Result<Self> {
        let mut nfa = match spec {
            ShiftSpec::Sft(s) => sft_nfa(s)?,
            ShiftSpec::Markov { matrix, .. } => {
                let d = matrix.dim();
                // State 0 reads the first symbol; state 1 + a remembers a.
                let mut trans = vec![(0..d).map(|a| (a as Symbol, a + 1)).collect::<Vec<_>>()];
                for a in 0..d {
                    trans.push(matrix.successors(a).map(|b| (b as Symbol, b + 1)).collect());
                }
                Nfa {
                    n_symbols: d,
                    initial: vec![0],
                    trans,
                }
            }
            ShiftSpec::Graph(g) => {
                let mut trans = vec![Vec::new(); g.vertices.len()];
                for e in &g.edges {
                    trans[e.src].push((e.label, e.dst));
                }
                Nfa {
                    n_symbols: g.alphabet.len(),
                    initial: (0..g.vertices.len()).collect(),
                    trans,
                }
            }
            ShiftSpec::BoundedDensity(f) => return Ok(Language::Density(f.clone())),
        };
        nfa.prune();
        Ok(Language::Regular {
            alphabet: spec.alphabet(),
            dfa: nfa.determinize()?,
        })
    }

    pub fn n_symbols(&self) -> usize {
        match self {
            Language::Regular { dfa, .. } => dfa.n_symbols,
            Language::Density(_) => 2,
        }
    }

    /// The empty shift accepts nothing, not even the empty word.
    pub fn is_empty(&self) -> bool {
        match self {
            Language::Regular { dfa, .. } => dfa.start.is_none(),
            Language::Density(_) => false,
        }
    }

    pub fn start(&self) -> Option<Cursor> {
        match self {
            Language::Regular { dfa, .. } => dfa.start.map(Cursor::State),
            Language::Density(_) => Some(Cursor::History(Vec::new())),
        }
    }

    pub fn step(&self, c: &Cursor, a: Symbol) -> Option<Cursor> {
        if a as usize >= self.n_symbols() {
            return None;
        }
        match (self, c) {
            (Language::Regular { dfa, .. }, Cursor::State(q)) => dfa.step(*q, a).map(Cursor::State),
            (Language::Density(f), Cursor::History(h)) => {
                let mut next = h.clone();
                next.push(a);
                if a == 1 {
                    // Only windows ending in the new 1 can newly overflow.
                    let mut sum = 0;
                    for (len, &s) in next.iter().rev().enumerate() {
                        sum += s as u64;
                        if sum > f.eval(len as u64 + 1) {
                            return None;
                        }
                    }
                }
                Some(Cursor::History(next))
            }
            _ => None,
        }
    }

    pub fn run(&self, w: &[Symbol]) -> Option<Cursor> {
        let mut c = self.start()?;
        for &a in w {
            c = self.step(&c, a)?;
        }
        Some(c)
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        self.run(w).is_some()
    }

    /// Admissible words of length `m` in lexicographic order.
    pub fn words(&self, m: usize) -> Vec<Word> {
        let mut out = Vec::new();
        if let Some(c) = self.start() {
            let mut w = Vec::new();
            self.collect(&c, m, &mut w, &mut out);
        }
        out
    }

    fn collect(&self, c: &Cursor, m: usize, w: &mut Word, out: &mut Vec<Word>) {
        if w.len() == m {
            out.push(w.clone());
            return;
        }
        for a in 0..self.n_symbols() as Symbol {
            if let Some(next) = self.step(c, a) {
                w.push(a);
                self.collect(&next, m, w, out);
                w.pop();
            }
        }
    }
}
