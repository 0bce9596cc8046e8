//! Deterministic synthetic log generation for benchmarks.

use complog_core::event_log::{EventLog, EventRow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Shape of a generated log: `cases` traces of uniformly random length in
/// `min_len..=max_len`, activities drawn uniformly from `a0..a{activities-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub cases: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub activities: usize,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("need at least one activity label")]
    NoActivities,
    #[error("invalid trace length bounds {min}..{max}; need 1 <= min <= max")]
    BadLengthBounds { min: usize, max: usize },
}

/// Build a random log. The same parameters always produce the same log:
/// the generator is a seeded ChaCha8 stream consumed in a fixed order.
/// Timestamps are strictly increasing within a case, with gaps between one
/// minute and one day.
pub fn gen_log(params: &GenParams) -> Result<EventLog, GenError> {
    if params.activities == 0 {
        return Err(GenError::NoActivities);
    }
    if params.min_len == 0 || params.min_len > params.max_len {
        return Err(GenError::BadLengthBounds { min: params.min_len, max: params.max_len });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut rows = Vec::with_capacity(params.cases * params.min_len);
    for case in 0..params.cases {
        let len = rng.gen_range(params.min_len..=params.max_len);
        let mut ts = 1_600_000_000_i64 + rng.gen_range(0..=31_536_000);
        for _ in 0..len {
            let act = rng.gen_range(0..params.activities);
            rows.push(EventRow::new(format!("c{case}"), format!("a{act}"), ts));
            ts += rng.gen_range(60..=86_400);
        }
    }
    Ok(EventLog::from_rows(rows).expect("generated rows are well-formed"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_log() {
        let params =
            GenParams { cases: 3, min_len: 4, max_len: 4, activities: 2, seed: 7 };
        assert_eq!(gen_log(&params).unwrap(), gen_log(&params).unwrap());
    }

    #[test]
    fn different_seeds_diverge() {
        let a = GenParams { cases: 5, min_len: 8, max_len: 8, activities: 4, seed: 1 };
        let b = GenParams { seed: 2, ..a.clone() };
        assert_ne!(gen_log(&a).unwrap(), gen_log(&b).unwrap());
    }

    #[test]
    fn summary_matches_requested_shape() {
        let params =
            GenParams { cases: 100, min_len: 10, max_len: 10, activities: 5, seed: 42 };
        let log = gen_log(&params).unwrap();
        assert_eq!(log.num_cases(), 100);
        assert_eq!(log.num_events(), 1000);
        assert!(log.num_activities() <= 5);
    }

    #[test]
    fn timestamps_step_by_bounded_gaps() {
        let params =
            GenParams { cases: 10, min_len: 2, max_len: 20, activities: 3, seed: 9 };
        let log = gen_log(&params).unwrap();
        for trace in log.traces() {
            assert!((2..=20).contains(&trace.events.len()));
            for pair in trace.events.windows(2) {
                let gap = pair[1].timestamp - pair[0].timestamp;
                assert!((60..=86_400).contains(&gap), "gap {gap} out of range");
            }
        }
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let base =
            GenParams { cases: 1, min_len: 1, max_len: 1, activities: 1, seed: 0 };
        assert_eq!(
            gen_log(&GenParams { activities: 0, ..base.clone() }),
            Err(GenError::NoActivities)
        );
        assert_eq!(
            gen_log(&GenParams { min_len: 0, ..base.clone() }),
            Err(GenError::BadLengthBounds { min: 0, max: 1 })
        );
        assert_eq!(
            gen_log(&GenParams { min_len: 5, max_len: 2, ..base }),
            Err(GenError::BadLengthBounds { min: 5, max: 2 })
        );
    }

    #[test]
    fn zero_cases_gives_empty_log() {
        let params =
            GenParams { cases: 0, min_len: 1, max_len: 3, activities: 2, seed: 0 };
        assert!(gen_log(&params).unwrap().is_empty());
    }
}
