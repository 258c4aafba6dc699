//! Fixtures shared by the criterion benches.

use posgeom::algebra::{rat, Rational};
use posgeom::kinematics::{sample_kinematics_with, KinematicData, SamplingMode};
use posgeom::signature::PiecewiseLinearPath;

pub fn kinematics(n: usize, mode: SamplingMode) -> KinematicData {
    sample_kinematics_with(n, 1, mode).expect("sampler succeeds")
}

/// A zigzag in `d` dimensions with `segments` pieces.
pub fn zigzag(d: usize, segments: usize) -> PiecewiseLinearPath {
    let points: Vec<Vec<Rational>> = (0..=segments)
        .map(|i| {
            (0..d)
                .map(|k| rat(((i * (k + 2)) % 7) as i64 - 3, (k + 1) as i64))
                .collect()
        })
        .collect();
    PiecewiseLinearPath::new(points).expect("non-empty path")
}
