//! Seeded random command streams and the session safety checks run over
//! them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::display::{CanvasSize, Edge, Technique, VideoId};
use crate::fixture::{demo_markers, SequenceSpec};
use crate::geometry::Direction;
use crate::script::{Command, DragTarget, PeekAnchor, Target};
use crate::session::{Engine, EngineConfig, SessionState, JUMP_SECONDS};

#[derive(Debug, Error)]
pub enum FuzzFailure {
    #[error("step {step} ({command}): invariant violated: {message}")]
    Invariant {
        step: usize,
        command: String,
        message: String,
    },
    #[error("step {step} ({command}): rejected command changed the state")]
    RejectedMutation { step: usize, command: String },
    #[error("step {step} ({command}): clock {video} at {got}, expected {expected}")]
    Jump {
        step: usize,
        command: String,
        video: VideoId,
        got: f64,
        expected: f64,
    },
    #[error("step {step} ({command}): applying twice did not restore the state")]
    Involution { step: usize, command: String },
}

/// Counts from a completed fuzz run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub steps: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub jumps_checked: usize,
    pub involutions_checked: usize,
}

fn video(rng: &mut impl Rng) -> VideoId {
    if rng.gen_bool(0.5) {
        VideoId::A
    } else {
        VideoId::B
    }
}

fn target(rng: &mut impl Rng) -> Target {
    match rng.gen_range(0..3) {
        0 => Target::Video(VideoId::A),
        1 => Target::Video(VideoId::B),
        _ => Target::Both,
    }
}

fn direction(rng: &mut impl Rng) -> Direction {
    Direction::new(rng.gen_range(-180.0..180.0), rng.gen_range(-90.0..=90.0))
}

/// A random command from the whole grammar, including ones the technique
/// rejects. Arguments stay near their meaningful ranges with some
/// excursions past them.
pub fn random_command(rng: &mut impl Rng, canvas: CanvasSize, duration: f64) -> Command {
    match rng.gen_range(0..18) {
        0 => Command::Play(target(rng)),
        1 => Command::Pause(target(rng)),
        2 => Command::Seek(video(rng), rng.gen_range(-0.2 * duration..1.2 * duration)),
        3 => {
            let step = if rng.gen_bool(0.5) { JUMP_SECONDS } else { -JUMP_SECONDS };
            Command::Jump(video(rng), step)
        }
        4 => Command::Toggle,
        5 => Command::Swap,
        6 => Command::ExtendVr {
            video: video(rng),
            edge: if rng.gen_bool(0.5) { Edge::Start } else { Edge::End },
            az: rng.gen_range(-360.0..720.0),
        },
        7 => Command::SlideVr {
            video: video(rng),
            delta: rng.gen_range(-200.0..200.0),
            commit: rng.gen_bool(0.5),
        },
        8 => Command::ExtendDivider(rng.gen_range(-0.2..1.2)),
        9 => Command::Drag {
            target: match rng.gen_range(0..3) {
                0 => DragTarget::Video(VideoId::A),
                1 => DragTarget::Video(VideoId::B),
                _ => DragTarget::Shared,
            },
            dyaw: rng.gen_range(-200.0..200.0),
            dpitch: rng.gen_range(-120.0..120.0),
        },
        10 => Command::PeekOn(match rng.gen_range(0..3) {
            0 => PeekAnchor::Gaze,
            1 => PeekAnchor::Direction(direction(rng)),
            _ => PeekAnchor::Pixel {
                x: rng.gen_range(0..canvas.width + canvas.width / 8),
                y: rng.gen_range(0..canvas.height + canvas.height / 8),
            },
        }),
        11 => Command::PeekOff,
        12 => Command::RoisSxs,
        13 => Command::RoisOverlay,
        14 => Command::ResetViews,
        15 => Command::SetViews360,
        16 => Command::RestartVideos,
        _ => Command::SetHeadPose(direction(rng)),
    }
}

/// Engine over two 30 s clips with moving ROI tracks on both videos, on a
/// small canvas.
pub fn fuzz_engine(technique: Technique) -> Engine {
    let mut config = EngineConfig::new(technique, [30.0, 30.0]).with_canvas(CanvasSize {
        width: 632,
        height: 200,
    });
    for (v, marker) in VideoId::BOTH.into_iter().zip(demo_markers()) {
        let track = SequenceSpec::new(v, 64, 1.0, 30)
            .with_marker(marker)
            .marker_track()
            .expect("demo marker track is valid");
        config = config.with_roi(track);
    }
    Engine::new(config).expect("fuzz engine config is valid")
}

/// Runs `steps` random commands interleaved with random ticks, checking
/// after every step that:
///
/// - the state satisfies [`SessionState::check_invariants`];
/// - a rejected command is reported as an error and leaves the state as it
///   was;
/// - an accepted jump lands on the clamped target;
/// - an accepted swap or toggle applied again restores the state.
pub fn fuzz_session(engine: &Engine, seed: u64, steps: usize) -> Result<FuzzReport, FuzzFailure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = engine.config();
    let duration = cfg.durations[0].max(cfg.durations[1]);
    let mut state = engine.initial_state().expect("engine validated its config");
    let mut report = FuzzReport::default();
    for step in 0..steps {
        if rng.gen_bool(0.25) {
            state = engine.tick(&state, rng.gen_range(0.0..3.0));
            check(&state, step, "tick")?;
        }
        let cmd = random_command(&mut rng, cfg.canvas, duration);
        let before = state.clone();
        report.steps += 1;
        match engine.apply(&state, &cmd) {
            Ok(next) => {
                report.accepted += 1;
                check_effects(engine, &before, &next, &cmd, step, &mut report)?;
                state = next;
            }
            Err(_) => {
                report.rejected += 1;
                if state != before {
                    return Err(FuzzFailure::RejectedMutation {
                        step,
                        command: cmd.to_string(),
                    });
                }
            }
        }
        check(&state, step, &cmd.to_string())?;
    }
    Ok(report)
}

fn check(state: &SessionState, step: usize, command: &str) -> Result<(), FuzzFailure> {
    state.check_invariants().map_err(|message| FuzzFailure::Invariant {
        step,
        command: command.to_string(),
        message,
    })
}

fn check_effects(
    engine: &Engine,
    before: &SessionState,
    next: &SessionState,
    cmd: &Command,
    step: usize,
    report: &mut FuzzReport,
) -> Result<(), FuzzFailure> {
    match *cmd {
        Command::Jump(v, dt) => {
            report.jumps_checked += 1;
            let expected = (before.clock(v).position + dt).clamp(0.0, before.duration(v));
            let got = next.clock(v).position;
            if got != expected {
                return Err(FuzzFailure::Jump {
                    step,
                    command: cmd.to_string(),
                    video: v,
                    got,
                    expected,
                });
            }
        }
        Command::Swap | Command::Toggle => {
            report.involutions_checked += 1;
            let back = engine.apply(next, cmd).ok();
            if back.as_ref() != Some(before) {
                return Err(FuzzFailure::Involution {
                    step,
                    command: cmd.to_string(),
                });
            }
        }
        _ => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_fuzz_passes_for_every_technique() {
        for t in Technique::ALL {
            let r = fuzz_session(&fuzz_engine(t), 7, 500).unwrap();
            assert_eq!(r.steps, 500);
            assert!(r.accepted > 0 && r.rejected > 0, "{t}: {r:?}");
        }
    }

    #[test]
    fn same_seed_same_commands() {
        let canvas = CanvasSize { width: 100, height: 50 };
        let a: Vec<Command> = {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            (0..50).map(|_| random_command(&mut rng, canvas, 10.0)).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b: Vec<Command> = (0..50).map(|_| random_command(&mut rng, canvas, 10.0)).collect();
        assert_eq!(a, b);
    }
}
