//! Todd-Coxeter coset enumeration for two-generator presentations.
//!
//! Relator-based (HLT) definition strategy with deduction by scanning,
//! coincidence merging through a forwarding table, and a lookahead pass
//! when the live-coset limit is reached.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Generator or inverse generator. The discriminant is the column in the
/// coset table; `x ^ 1` is the inverse column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A = 0,
    AInv = 1,
    B = 2,
    BInv = 3,
}

impl Letter {
    const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter::ALL[self.index() ^ 1]
    }

    fn symbol(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }
}

/// Word over `a, b` and their inverses, written `a`, `A`, `b`, `B`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn power(letter: Letter, exponent: usize) -> Word {
        Word(vec![letter; exponent])
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(
            self.0
                .iter()
                .copied()
                .cycle()
                .take(self.0.len() * times)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        if s == "1" {
            return Ok(Word::default());
        }
        s.chars()
            .map(|c| match c {
                'a' => Ok(Letter::A),
                'A' => Ok(Letter::AInv),
                'b' => Ok(Letter::B),
                'B' => Ok(Letter::BInv),
                other => Err(Error::InvalidParameter(alloc::format!(
                    "bad letter {other:?} in word"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// `⟨a, b | relators⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    /// Van Dyck group `D(d, f, 2) = ⟨a, b | a^d, b^f, (ab)^2⟩`.
    pub fn van_dyck(d: usize, f: usize) -> Self {
        let ab = Word(vec![Letter::A, Letter::B]);
        GroupPresentation {
            relators: vec![
                Word::power(Letter::A, d),
                Word::power(Letter::B, f),
                ab.repeat(2),
            ],
        }
    }

    pub fn with_relator(mut self, w: Word) -> Self {
        self.relators.push(w);
        self
    }
}

/// Complete coset table: `action[c][x]` is the image of coset `c` under
/// letter `x`. Coset 0 is the subgroup itself; numbering is breadth-first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    action: Vec<[u32; 4]>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.action.len()
    }

    pub fn is_empty(&self) -> bool {
        self.action.is_empty()
    }

    #[inline]
    pub fn act(&self, coset: usize, letter: Letter) -> usize {
        self.action[coset][letter.index()] as usize
    }

    pub fn act_word(&self, coset: usize, word: &Word) -> usize {
        word.0.iter().fold(coset, |c, &l| self.act(c, l))
    }

    /// Every generator column is a permutation inverse to its partner.
    pub fn is_consistent(&self) -> bool {
        let n = self.len();
        self.action.iter().enumerate().all(|(c, row)| {
            row.iter().enumerate().all(|(x, &img)| {
                (img as usize) < n && self.action[img as usize][x ^ 1] as usize == c
            })
        })
    }

    /// Every relator fixes every coset.
    pub fn relators_hold(&self, p: &GroupPresentation) -> bool {
        (0..self.len()).all(|c| p.relators.iter().all(|r| self.act_word(c, r) == c))
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(c) = queue.pop_front() {
            for &img in &self.action[c] {
                if !seen[img as usize] {
                    seen[img as usize] = true;
                    count += 1;
                    queue.push_back(img as usize);
                }
            }
        }
        count == self.len()
    }

    /// Orbits of `⟨w⟩` acting on the cosets, each listed as
    /// `c, c·w, c·w², ...`, ordered by smallest starting coset.
    pub fn orbits(&self, w: &Word) -> Vec<Vec<usize>> {
        let mut owner = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if owner[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut orbit = Vec::new();
            let mut c = start;
            loop {
                owner[c] = id;
                orbit.push(c);
                c = self.act_word(c, w);
                if c == start {
                    break;
                }
            }
            out.push(orbit);
        }
        out
    }
}

const NONE: u32 = u32::MAX;

struct Enumerator<'a> {
    relators: &'a [Word],
    table: Vec<[u32; 4]>,
    /// Forwarding pointer; `forward[c] == c` for live cosets.
    forward: Vec<u32>,
    live: usize,
    max_live: usize,
    queue: VecDeque<u32>,
}

enum Fill {
    Done,
    Full,
}

impl<'a> Enumerator<'a> {
    fn new(relators: &'a [Word], max_live: usize) -> Self {
        Enumerator {
            relators,
            table: vec![[NONE; 4]],
            forward: vec![0],
            live: 1,
            max_live,
            queue: VecDeque::new(),
        }
    }

    #[inline]
    fn is_live(&self, c: u32) -> bool {
        self.forward[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.forward[r as usize] != r {
            r = self.forward[r as usize];
        }
        let mut cur = c;
        while self.forward[cur as usize] != r {
            let next = self.forward[cur as usize];
            self.forward[cur as usize] = r;
            cur = next;
        }
        r
    }

    fn define(&mut self, c: u32, x: usize) -> bool {
        if self.live >= self.max_live {
            return false;
        }
        let d = self.table.len() as u32;
        self.table.push([NONE; 4]);
        self.forward.push(d);
        self.live += 1;
        self.table[c as usize][x] = d;
        self.table[d as usize][x ^ 1] = c;
        true
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = if a < b { (a, b) } else { (b, a) };
        self.forward[kill as usize] = keep;
        self.live -= 1;
        self.queue.push_back(kill);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(e) = self.queue.pop_front() {
            for x in 0..4 {
                let f = self.table[e as usize][x];
                if f == NONE {
                    continue;
                }
                if self.table[f as usize][x ^ 1] == e {
                    self.table[f as usize][x ^ 1] = NONE;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.table[e1 as usize][x];
                if ex != NONE {
                    self.merge(f1, ex);
                } else {
                    let fx = self.table[f1 as usize][x ^ 1];
                    if fx != NONE {
                        self.merge(e1, fx);
                    } else {
                        self.table[e1 as usize][x] = f1;
                        self.table[f1 as usize][x ^ 1] = e1;
                    }
                }
            }
        }
    }

    /// Traces `word` from `c` in both directions, closing the gap by a
    /// deduction or a coincidence. With `define` set, missing entries are
    /// filled by new cosets.
    fn scan(&mut self, c: u32, word: &[Letter], define: bool) -> Fill {
        if word.is_empty() {
            return Fill::Done;
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = word.len() - 1;
        loop {
            while i <= j {
                let next = self.table[f as usize][word[i].index()];
                if next == NONE {
                    break;
                }
                f = next;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Fill::Done;
            }
            while j >= i {
                let next = self.table[b as usize][word[j].inverse().index()];
                if next == NONE {
                    break;
                }
                b = next;
                if j == 0 {
                    // Whole word traced backwards: i must be 0 here.
                    self.coincidence(f, b);
                    return Fill::Done;
                }
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Fill::Done;
            }
            if i == j {
                let x = word[i].index();
                self.table[f as usize][x] = b;
                self.table[b as usize][x ^ 1] = f;
                return Fill::Done;
            }
            if !define {
                return Fill::Done;
            }
            if !self.define(f, word[i].index()) {
                return Fill::Full;
            }
        }
    }

    /// Scans every live coset under every relator without defining.
    fn lookahead(&mut self) {
        let relators = self.relators;
        for c in 0..self.table.len() {
            for r in relators {
                if !self.is_live(c as u32) {
                    break;
                }
                let _ = self.scan(c as u32, &r.0, false);
            }
        }
    }

    fn make_room(&mut self) -> Result<()> {
        self.lookahead();
        if self.live >= self.max_live {
            return Err(Error::CapacityExceeded {
                max_cosets: self.max_live,
            });
        }
        Ok(())
    }

    /// Renumbers live cosets consecutively, preserving order, and maps the
    /// cursor to the first live coset at or after it.
    fn compact(&mut self, cursor: usize) -> usize {
        let mut new_id = vec![NONE; self.table.len()];
        let mut next = 0u32;
        for c in 0..self.table.len() {
            if self.is_live(c as u32) {
                new_id[c] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize);
        for c in 0..self.table.len() {
            if new_id[c] != NONE {
                let mut row = self.table[c];
                for e in row.iter_mut() {
                    if *e != NONE {
                        *e = new_id[*e as usize];
                    }
                }
                table.push(row);
            }
        }
        let new_cursor = (cursor..self.table.len())
            .find(|&c| new_id[c] != NONE)
            .map_or(table.len(), |c| new_id[c] as usize);
        self.table = table;
        self.forward = (0..next).collect();
        new_cursor
    }

    fn run(&mut self, subgroup: &[Word]) -> Result<()> {
        let relators = self.relators;
        for w in subgroup {
            while let Fill::Full = self.scan(0, &w.0, true) {
                self.make_room()?;
            }
        }
        let mut c = 0usize;
        'cosets: while c < self.table.len() {
            if self.is_live(c as u32) {
                for r in relators {
                    if !self.is_live(c as u32) {
                        break;
                    }
                    if let Fill::Full = self.scan(c as u32, &r.0, true) {
                        self.make_room()?;
                        c = self.compact(c);
                        continue 'cosets;
                    }
                }
                if self.is_live(c as u32) {
                    for x in 0..4 {
                        if self.table[c][x] == NONE && !self.define(c as u32, x) {
                            self.make_room()?;
                            c = self.compact(c);
                            continue 'cosets;
                        }
                    }
                }
            }
            c += 1;
        }
        Ok(())
    }

    /// Live cosets renumbered in breadth-first order from coset 0.
    fn finish(mut self) -> CosetTable {
        for c in 0..self.table.len() {
            if self.is_live(c as u32) {
                for x in 0..4 {
                    let t = self.table[c][x];
                    if t != NONE {
                        self.table[c][x] = self.rep(t);
                    }
                }
            }
        }
        let mut order = Vec::with_capacity(self.live);
        let mut new_id = vec![NONE; self.table.len()];
        new_id[0] = 0;
        order.push(0u32);
        let mut head = 0;
        while head < order.len() {
            let c = order[head] as usize;
            head += 1;
            for x in 0..4 {
                let t = self.table[c][x];
                if t != NONE && new_id[t as usize] == NONE {
                    new_id[t as usize] = order.len() as u32;
                    order.push(t);
                }
            }
        }
        let action = order
            .iter()
            .map(|&c| {
                let mut row = self.table[c as usize];
                for e in row.iter_mut() {
                    *e = new_id[*e as usize];
                }
                row
            })
            .collect();
        CosetTable { action }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` in the
/// group presented by `presentation`.
///
/// Fails with [`Error::CapacityExceeded`] when more than `max_cosets`
/// cosets would be live at once (the index may be infinite).
pub fn todd_coxeter(
    presentation: &GroupPresentation,
    subgroup: &[Word],
    max_cosets: usize,
) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::InvalidParameter(String::from(
            "max_cosets must be positive",
        )));
    }
    if max_cosets >= NONE as usize {
        return Err(Error::InvalidParameter(String::from(
            "max_cosets too large",
        )));
    }
    let mut e = Enumerator::new(&presentation.relators, max_cosets);
    e.run(subgroup)?;
    let table = e.finish();
    debug_assert!(table.is_consistent());
    debug_assert!(table.relators_hold(presentation));
    Ok(table)
}
