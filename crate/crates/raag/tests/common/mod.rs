#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use raag::{Raag, SimplicialGraph, Syllable, Word};

/// One representative per isomorphism class of graphs on `n` vertices,
/// found by brute force over vertex permutations.
pub fn graphs_up_to_iso(n: usize) -> Vec<SimplicialGraph> {
    let pairs = n * n.saturating_sub(1) / 2;
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0..(1u64 << pairs) {
        let adj = edge_matrix(n, mask);
        let canon = perms.iter().map(|p| relabeled_mask(n, &adj, p)).min().unwrap_or(0);
        if seen.insert(canon) {
            out.push(SimplicialGraph::from_edge_mask(n, mask));
        }
    }
    out
}

pub fn all_graphs_up_to(n: usize) -> Vec<SimplicialGraph> {
    (0..=n).flat_map(graphs_up_to_iso).collect()
}

fn edge_matrix(n: usize, mask: u64) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                adj[i][j] = true;
                adj[j][i] = true;
            }
            bit += 1;
        }
    }
    adj
}

fn relabeled_mask(n: usize, adj: &[Vec<bool>], p: &[usize]) -> u64 {
    let mut m = 0;
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if adj[p[i]][p[j]] {
                m |= 1 << bit;
            }
            bit += 1;
        }
    }
    m
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// A letter is (generator, ±1).
pub type Letter = (u8, i8);

/// Rewriting-closure key of a letter word: the shortlex-least word reachable
/// by free cancellation and swaps of adjacent commuting letters.
pub fn closure_key(g: &SimplicialGraph, word: &[Letter]) -> Vec<Letter> {
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(word.to_vec());
    queue.push_back(word.to_vec());
    let mut best = word.to_vec();
    while let Some(w) = queue.pop_front() {
        if (w.len(), &w) < (best.len(), &best) {
            best = w.clone();
        }
        for i in 0..w.len().saturating_sub(1) {
            let (x, y) = (w[i], w[i + 1]);
            let mut next = Vec::new();
            if x.0 == y.0 && x.1 == -y.1 {
                let mut v = w.clone();
                v.drain(i..i + 2);
                next.push(v);
            }
            if x.0 != y.0 && g.adjacent(x.0 as usize, y.0 as usize) {
                let mut v = w.clone();
                v.swap(i, i + 1);
                next.push(v);
            }
            for v in next {
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
    }
    best
}

pub fn to_syllables(word: &[Letter]) -> Vec<Syllable> {
    word.iter().map(|&(g, s)| Syllable::new(g as usize, s as i64)).collect()
}

/// All letter words of length exactly `len`.
pub fn letter_words(rank: usize, len: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (0..rank as u8).flat_map(|g| [(g, 1), (g, -1)]).collect();
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * letters.len());
        for w in &out {
            for &l in &letters {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Checks that normal-form equality coincides with closure-key equality on
/// every word of length ≤ `max_len`. Returns the number of words checked or
/// a description of the first disagreement.
pub fn normal_form_agrees(g: &SimplicialGraph, max_len: usize) -> Result<usize, String> {
    use std::collections::HashMap;
    let raag = Raag::new(g.clone());
    let mut by_key: HashMap<Vec<Letter>, Word> = HashMap::new();
    let mut by_nf: HashMap<Word, Vec<Letter>> = HashMap::new();
    let mut count = 0;
    for len in 0..=max_len {
        for w in letter_words(g.len(), len) {
            let nf = raag.normalize(&to_syllables(&w));
            let key = closure_key(g, &w);
            if nf.len() as usize != key.len() {
                return Err(format!("{g:?}: {w:?} has normal form length {} but geodesic length {}", nf.len(), key.len()));
            }
            if let Some(prev) = by_key.get(&key) {
                if *prev != nf {
                    return Err(format!("{g:?}: {w:?} equivalent words with different normal forms"));
                }
            } else {
                by_key.insert(key.clone(), nf.clone());
            }
            if let Some(prev) = by_nf.get(&nf) {
                if *prev != key {
                    return Err(format!("{g:?}: {w:?} inequivalent words share a normal form"));
                }
            } else {
                by_nf.insert(nf, key);
            }
            count += 1;
        }
    }
    Ok(count)
}

pub fn raag(g: SimplicialGraph) -> Raag {
    Raag::new(g)
}

pub fn p3() -> Raag {
    Raag::new(SimplicialGraph::path(&["a", "b", "c"]))
}

pub fn edge() -> Raag {
    Raag::new(SimplicialGraph::path(&["a", "b"]))
}

pub fn k1() -> Raag {
    Raag::new(SimplicialGraph::discrete(&["a"]))
}

pub fn c4() -> Raag {
    Raag::new(SimplicialGraph::from_parts(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]))
}

pub fn c5() -> Raag {
    Raag::new(SimplicialGraph::cycle(5))
}

pub fn w(g: &Raag, s: &str) -> Word {
    g.parse(s).unwrap()
}
