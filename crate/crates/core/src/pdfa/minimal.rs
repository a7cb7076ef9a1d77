use super::{Pdfa, ALPHABET};

pub const DEFAULT_MINIMALITY_TOL: f64 = 1e-9;

/// Moore-style partition refinement. `initial[s]` is the starting block of
/// state `s`; blocks are split until states in the same block send every
/// symbol to the same block (or both lack the transition). Returns the
/// final block index of each state, numbered by first appearance.
pub(crate) fn refine_partition(
    initial: &[usize],
    successor: impl Fn(usize, usize) -> Option<usize>,
) -> Vec<usize> {
    let n = initial.len();
    let mut blocks = renumber(initial);
    loop {
        let signatures: Vec<(usize, Vec<Option<usize>>)> = (0..n)
            .map(|s| {
                let succ = (0..2).map(|x| successor(s, x).map(|t| blocks[t])).collect();
                (blocks[s], succ)
            })
            .collect();
        let mut seen: Vec<&(usize, Vec<Option<usize>>)> = Vec::new();
        let refined: Vec<usize> = signatures
            .iter()
            .map(|sig| match seen.iter().position(|s| *s == sig) {
                Some(i) => i,
                None => {
                    seen.push(sig);
                    seen.len() - 1
                }
            })
            .collect();
        if count_blocks(&refined) == count_blocks(&blocks) {
            return refined;
        }
        blocks = refined;
    }
}

fn renumber(labels: &[usize]) -> Vec<usize> {
    let mut map: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| match map.iter().position(|m| m == l) {
            Some(i) => i,
            None => {
                map.push(*l);
                map.len() - 1
            }
        })
        .collect()
}

fn count_blocks(blocks: &[usize]) -> usize {
    blocks.iter().max().map_or(0, |m| m + 1)
}

/// Equivalence classes of states under emission-distribution refinement.
/// Two emission distributions are the same when every symbol probability
/// differs by at most `tol`.
pub fn equivalence_classes(pdfa: &Pdfa, tol: f64) -> Vec<usize> {
    let n = pdfa.n_states();
    let mut reps: Vec<usize> = Vec::new();
    let initial: Vec<usize> = (0..n)
        .map(|s| {
            let close = |r: usize| {
                ALPHABET
                    .iter()
                    .all(|&x| (pdfa.emission(s, x) - pdfa.emission(r, x)).abs() <= tol)
            };
            match reps.iter().position(|&r| close(r)) {
                Some(i) => i,
                None => {
                    reps.push(s);
                    reps.len() - 1
                }
            }
        })
        .collect();
    refine_partition(&initial, |s, x| pdfa.next_state(s, x as u8))
}

/// True when no two states are equivalent.
pub fn is_minimal(pdfa: &Pdfa, tol: f64) -> bool {
    let classes = equivalence_classes(pdfa, tol);
    count_blocks(&classes) == pdfa.n_states()
}
