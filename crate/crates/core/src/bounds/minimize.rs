//! DFA minimisation by reachability pruning plus Moore partition refinement, and
//! product-automaton language comparison.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::models::{Dfa, ModelError};

/// States reachable from the initial state, in breadth-first discovery order
/// (symbols tried in alphabet order).
fn reachable_bfs(d: &Dfa) -> Vec<usize> {
    let mut seen = vec![false; d.num_states()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([d.initial()]);
    seen[d.initial()] = true;
    while let Some(s) = queue.pop_front() {
        order.push(s);
        for a in 0..d.alphabet().len() {
            let t = d.next(s, a);
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    order
}

/// Minimal DFA for the language of `d`, together with its state count.
///
/// States of the result are numbered in breadth-first order from the initial state, so
/// two minimal DFAs of the same language over the same alphabet come out identical.
pub fn minimal_dfa(d: &Dfa) -> (Dfa, usize) {
    let k = d.alphabet().len();
    let reachable = reachable_bfs(d);
    // block[s] for reachable s; unreachable states never get looked at.
    let mut block = vec![usize::MAX; d.num_states()];
    for &s in &reachable {
        block[s] = usize::from(d.is_accepting(s));
    }
    let mut count = reachable
        .iter()
        .map(|&s| block[s])
        .collect::<alloc::collections::BTreeSet<_>>()
        .len();
    loop {
        let mut ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut next_block = block.clone();
        for &s in &reachable {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(block[s]);
            sig.extend((0..k).map(|a| block[d.next(s, a)]));
            let fresh = ids.len();
            next_block[s] = *ids.entry(sig).or_insert(fresh);
        }
        block = next_block;
        if ids.len() == count {
            break;
        }
        count = ids.len();
    }

    // Renumber blocks breadth-first from the initial block.
    let mut rep = vec![usize::MAX; count];
    for &s in &reachable {
        if rep[block[s]] == usize::MAX {
            rep[block[s]] = s;
        }
    }
    let mut order = vec![usize::MAX; count];
    let mut reps = Vec::with_capacity(count);
    let mut queue = VecDeque::from([block[d.initial()]]);
    order[block[d.initial()]] = 0;
    reps.push(rep[block[d.initial()]]);
    while let Some(b) = queue.pop_front() {
        let s = rep[b];
        for a in 0..k {
            let t = block[d.next(s, a)];
            if order[t] == usize::MAX {
                order[t] = reps.len();
                reps.push(rep[t]);
                queue.push_back(t);
            }
        }
    }
    let transitions = reps
        .iter()
        .map(|&s| (0..k).map(|a| order[block[d.next(s, a)]]).collect())
        .collect();
    let accepting: Vec<usize> = reps
        .iter()
        .enumerate()
        .filter_map(|(i, &s)| d.is_accepting(s).then_some(i))
        .collect();
    let min = Dfa::new(d.alphabet().clone(), 0, &accepting, transitions)
        .expect("refined automaton is well formed");
    (min, count)
}

/// Shortest word (shortlex-first) on which `a` and `b` disagree, or `None` when they
/// accept the same language.
pub fn distinguishing_word(a: &Dfa, b: &Dfa) -> Result<Option<Vec<usize>>, ModelError> {
    if a.alphabet() != b.alphabet() {
        return Err(ModelError::AlphabetMismatch {
            what: "compared automata have different alphabets".into(),
        });
    }
    let k = a.alphabet().len();
    let nb = b.num_states();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; a.num_states() * nb];
    let mut seen = vec![false; a.num_states() * nb];
    let start = a.initial() * nb + b.initial();
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        let (sa, sb) = (p / nb, p % nb);
        if a.is_accepting(sa) != b.is_accepting(sb) {
            let mut word = Vec::new();
            let mut cur = p;
            while let Some((prev, sym)) = parent[cur] {
                word.push(sym);
                cur = prev;
            }
            word.reverse();
            return Ok(Some(word));
        }
        for sym in 0..k {
            let t = a.next(sa, sym) * nb + b.next(sb, sym);
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some((p, sym));
                queue.push_back(t);
            }
        }
    }
    Ok(None)
}

/// DFA accepting exactly the given finite set of words; the result is minimal.
pub fn finite_language_dfa(
    alphabet: &crate::models::Alphabet,
    words: &[Vec<usize>],
) -> Result<Dfa, ModelError> {
    let k = alphabet.len();
    // State 0 is the sink, state 1 the root of the trie.
    let mut trans: Vec<Vec<usize>> = vec![vec![0; k], vec![0; k]];
    let mut accepting = Vec::new();
    for w in words {
        alphabet.check_word(w)?;
        let mut s = 1;
        for &a in w {
            if trans[s][a] == 0 {
                trans.push(vec![0; k]);
                trans[s][a] = trans.len() - 1;
            }
            s = trans[s][a];
        }
        accepting.push(s);
    }
    let trie = Dfa::new(alphabet.clone(), 1, &accepting, trans)?;
    Ok(minimal_dfa(&trie).0)
}
