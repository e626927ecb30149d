use rand::Rng;

use super::ExperimentError;
use crate::field::{format_scalar, FieldSpec, Scalar};
use crate::matrix::SeqA;
use crate::rng::{sized_index, stream_rng, DOMAIN_SEQUENCE};
use crate::tournament::{pair_count, random_tournament, tournament_count, Tournament};

/// Where the sequence `a` comes from in experiments that range over `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceSource {
    /// Entries repeated cyclically up to length `n`.
    Cyclic(SeqA),
    /// Integers repeated cyclically and reduced into the field in use; a
    /// value that reduces to zero is an error.
    Integers(Vec<i64>),
    /// Uniform nonzero residues over `GF(p)`, uniform integers in `1..=100`
    /// over `Q`; trial `k` at size `n` always draws the same sequence.
    RandomNonzero,
}

impl SequenceSource {
    pub fn sequence(
        &self,
        field: FieldSpec,
        n: usize,
        seed: u64,
        trial: u64,
    ) -> Result<SeqA, ExperimentError> {
        match self {
            SequenceSource::Cyclic(a) => {
                if a.field() != field {
                    return Err(ExperimentError::Invalid(format!(
                        "sequence is over {} but the field is {field}",
                        a.field()
                    )));
                }
                if a.is_empty() {
                    return Err(ExperimentError::Invalid("empty sequence".into()));
                }
                let vals = (0..n).map(|i| a.get(i % a.len()).clone()).collect();
                Ok(SeqA::new(field, vals)?)
            }
            SequenceSource::Integers(vs) => {
                if vs.is_empty() {
                    return Err(ExperimentError::Invalid("empty sequence".into()));
                }
                let vals = (0..n).map(|i| field.from_i64(vs[i % vs.len()])).collect();
                Ok(SeqA::new(field, vals)?)
            }
            SequenceSource::RandomNonzero => {
                let mut rng = stream_rng(seed, DOMAIN_SEQUENCE, sized_index(n, trial));
                let vals = (0..n).map(|_| random_nonzero(field, &mut rng)).collect();
                Ok(SeqA::new(field, vals)?)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SequenceSource::Cyclic(a) => {
                let vals: Vec<String> = a.values().iter().map(format_scalar).collect();
                format!("cyclic:{}", vals.join(","))
            }
            SequenceSource::Integers(vs) => {
                let vals: Vec<String> = vs.iter().map(i64::to_string).collect();
                format!("integers:{}", vals.join(","))
            }
            SequenceSource::RandomNonzero => "random-nonzero".into(),
        }
    }
}

/// Uniform nonzero element of `GF(p)`, or a uniform integer in `1..=100` over `Q`.
pub fn random_nonzero<R: Rng>(field: FieldSpec, rng: &mut R) -> Scalar {
    match field.order() {
        Some(p) => field.from_i64(rng.random_range(1..p) as i64),
        None => field.from_i64(rng.random_range(1..=100)),
    }
}

/// Which tournaments a per-tournament verifier runs over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TournamentSet {
    Explicit(Vec<Tournament>),
    /// Every labelled tournament, by code.
    Exhaustive,
    /// `count` uniform tournaments addressed by `(seed, index)`.
    Sampled { count: u64, seed: u64 },
}

impl TournamentSet {
    pub(crate) fn len(&self, n: usize) -> Result<usize, ExperimentError> {
        let len = match self {
            TournamentSet::Explicit(ts) => {
                if let Some(t) = ts.iter().find(|t| t.n() != n) {
                    return Err(ExperimentError::Invalid(format!(
                        "tournament has {} vertices, sequence has {n}",
                        t.n()
                    )));
                }
                ts.len() as u64
            }
            TournamentSet::Exhaustive => tournament_count(n)?,
            TournamentSet::Sampled { count, .. } => *count,
        };
        usize::try_from(len).map_err(|_| ExperimentError::TooLarge(format!("{len} tournaments")))
    }

    /// Tournament number `k` and its record id.
    pub(crate) fn get(&self, n: usize, k: usize) -> (Tournament, String) {
        match self {
            TournamentSet::Explicit(ts) => (ts[k].clone(), format!("t{k}")),
            TournamentSet::Exhaustive => (
                Tournament::from_code(n, k as u64).expect("code below the count"),
                format!("code={k}"),
            ),
            TournamentSet::Sampled { seed, .. } => (
                random_tournament(n, *seed, sized_index(n, k as u64)).expect("n already checked"),
                format!("sample={k}"),
            ),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            TournamentSet::Explicit(ts) => format!("explicit({})", ts.len()),
            TournamentSet::Exhaustive => "exhaustive".into(),
            TournamentSet::Sampled { count, seed } => format!("sampled({count}, seed={seed})"),
        }
    }
}

pub(crate) fn check_exhaustive_size(n: usize) -> Result<u64, ExperimentError> {
    tournament_count(n).map_err(|_| {
        ExperimentError::TooLarge(format!(
            "n = {n} has {} pairs; exhaustive runs need at most 63",
            pair_count(n)
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sources() {
        let q = FieldSpec::rationals();
        let gf3 = FieldSpec::prime(3).unwrap();
        let alt = SequenceSource::Integers(vec![1, 2]);
        assert_eq!(alt.sequence(gf3, 5, 0, 0).unwrap(), SeqA::from_i64s(gf3, &[1, 2, 1, 2, 1]).unwrap());
        assert!(SequenceSource::Integers(vec![3]).sequence(gf3, 2, 0, 0).is_err());
        let cyc = SequenceSource::Cyclic(SeqA::from_i64s(q, &[1, 2, 3]).unwrap());
        assert_eq!(cyc.sequence(q, 2, 0, 0).unwrap(), SeqA::from_i64s(q, &[1, 2]).unwrap());
        assert!(cyc.sequence(gf3, 2, 0, 0).is_err());
        assert_eq!(cyc.describe(), "cyclic:1,2,3");
    }

    #[test]
    fn random_sequences_are_addressed_and_in_range() {
        let gf5 = FieldSpec::prime(5).unwrap();
        let q = FieldSpec::rationals();
        let s = SequenceSource::RandomNonzero;
        assert_eq!(s.sequence(gf5, 20, 9, 4).unwrap(), s.sequence(gf5, 20, 9, 4).unwrap());
        assert_ne!(s.sequence(gf5, 20, 9, 4).unwrap(), s.sequence(gf5, 20, 9, 5).unwrap());
        let mut seen = [false; 5];
        for trial in 0..50 {
            for v in s.sequence(gf5, 20, 1, trial).unwrap().values() {
                seen[v.residue().unwrap() as usize] = true;
            }
            for v in s.sequence(q, 20, 1, trial).unwrap().values() {
                let r = v.as_ratio().unwrap();
                assert!(r.is_integer());
                let k: i64 = r.to_integer().try_into().unwrap();
                assert!((1..=100).contains(&k));
            }
        }
        assert_eq!(seen, [false, true, true, true, true]);
    }

    #[test]
    fn tournament_sets() {
        assert_eq!(TournamentSet::Exhaustive.len(4).unwrap(), 64);
        let (t, id) = TournamentSet::Exhaustive.get(4, 5);
        assert_eq!((t.code(), id.as_str()), (Some(5), "code=5"));
        let s = TournamentSet::Sampled { count: 3, seed: 2 };
        assert_eq!(s.len(40).unwrap(), 3);
        assert_eq!(s.get(40, 1).0, s.get(40, 1).0);
        let e = TournamentSet::Explicit(vec![Tournament::from_code(3, 1).unwrap()]);
        assert!(e.len(4).is_err());
        assert!(check_exhaustive_size(12).is_err());
    }
}
