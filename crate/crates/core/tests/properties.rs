//! Property tests over the geometry, layout, ROI and script layers.

use proptest::prelude::*;

use panocmp::display::{CanvasLayout, CanvasSize, Edge, LuneArea, PeekState, Technique, VideoId, VrLayout};
use panocmp::geometry::{
    angular_distance, dir_from_equirect, dir_to_viewport, equirect_from_dir, hfov_from_aspect, planet_project,
    planet_unproject, viewport_ray, Direction, PlanetMapConfig, Pole, Viewport,
};
use panocmp::roi::{RoiSample, RoiTrack, TimeEncoding};
use panocmp::script::Script;
use panocmp::session::{Engine, EngineConfig};

fn direction(max_pitch: f64) -> impl Strategy<Value = Direction> {
    (-180.0..180.0f64, -max_pitch..=max_pitch).prop_map(|(y, p)| Direction::new(y, p))
}

fn azimuth() -> impl Strategy<Value = f64> {
    0.0..360.0f64
}

fn lune() -> impl Strategy<Value = LuneArea> {
    (azimuth(), azimuth(), -180.0..180.0f64).prop_map(|(s, e, o)| LuneArea::new(s, e, o))
}

fn vr_layout() -> impl Strategy<Value = VrLayout> {
    (lune(), lune(), any::<bool>())
        .prop_map(|(a, b, front_a)| VrLayout::new(a, b, if front_a { VideoId::A } else { VideoId::B }))
}

/// A track of one or more runs with strictly increasing times.
fn track() -> impl Strategy<Value = RoiTrack> {
    prop::collection::vec(prop::collection::vec((0.05..0.9f64, direction(80.0)), 1..8), 1..4).prop_map(|runs| {
        let mut t = 0.0;
        let runs: Vec<Vec<RoiSample>> = runs
            .into_iter()
            .map(|run| {
                t += 3.0;
                run.into_iter()
                    .map(|(dt, d)| {
                        t += dt;
                        RoiSample::new(t, d, 10.0, 10.0).unwrap()
                    })
                    .collect()
            })
            .collect();
        RoiTrack::new(VideoId::A, runs, t + 1.0).unwrap()
    })
}

proptest! {
    #[test]
    fn equirect_round_trip(d in direction(89.9)) {
        let back = dir_from_equirect(equirect_from_dir(d));
        prop_assert!(angular_distance(d, back) < 1e-9, "{d:?} -> {back:?}");
    }

    #[test]
    fn viewport_round_trip(
        center in direction(80.0),
        vfov in 10.0..120.0f64,
        aspect in 0.5..3.5f64,
        x in -1.0..=1.0f64,
        y in -1.0..=1.0f64,
    ) {
        let vp = Viewport::from_aspect(center, vfov, aspect).unwrap();
        let d = viewport_ray(&vp, x, y);
        let (nx, ny) = dir_to_viewport(&vp, d).expect("ray inside its own frustum");
        prop_assert!(angular_distance(viewport_ray(&vp, nx, ny), d) < 1e-9);
        prop_assert!((nx - x).abs() < 1e-9 && (ny - y).abs() < 1e-9);
    }

    #[test]
    fn planet_round_trip(d in direction(90.0), up in -180.0..180.0f64, zenith in any::<bool>(), r in 10.0..500.0f64) {
        let pole = if zenith { Pole::Zenith } else { Pole::Nadir };
        let cfg = PlanetMapConfig::new(pole, up, r).unwrap();
        let p = planet_project(d, &cfg);
        let q = planet_project(planet_unproject(p, &cfg).unwrap(), &cfg);
        prop_assert!((p.0 - q.0).hypot(p.1 - q.1) < 1e-6, "{p:?} vs {q:?}");
    }

    #[test]
    fn planet_radius_is_linear_in_polar_angle(yaw in -180.0..180.0f64, r in 10.0..500.0f64) {
        let cfg = PlanetMapConfig::nadir(r).unwrap();
        for polar in [0.0, 45.0, 90.0, 135.0, 180.0] {
            let (mx, my) = planet_project(Direction::new(yaw, polar - 90.0), &cfg);
            prop_assert!((mx.hypot(my) - polar / 180.0 * r).abs() < 1e-9);
        }
    }

    #[test]
    fn triangle_inequality(a in direction(90.0), b in direction(90.0), c in direction(90.0)) {
        let ab = angular_distance(a, b);
        prop_assert!((0.0..=180.0).contains(&ab));
        prop_assert_eq!(ab, angular_distance(b, a));
        prop_assert!(angular_distance(a, c) <= ab + angular_distance(b, c) + 1e-9);
    }

    #[test]
    fn hfov_increases_with_aspect(vfov in 1.0..170.0f64, a in 0.01..10.0f64, step in 0.01..1.0f64) {
        let lo = hfov_from_aspect(vfov, a).unwrap();
        let hi = hfov_from_aspect(vfov, a + step).unwrap();
        prop_assert!(hi > lo || hi >= 179.999);
        prop_assert!((hfov_from_aspect(vfov, 1.0).unwrap() - vfov).abs() < 1e-9);
    }

    #[test]
    fn swap_is_an_involution(layout in vr_layout(), divider in 0.0..=1.0f64, sbs in any::<bool>()) {
        prop_assert_eq!(layout.swap().swap(), layout);
        let swapped = layout.swap();
        prop_assert_eq!(swapped.area(VideoId::A), layout.area(VideoId::A));
        let canvas = CanvasSize { width: 400, height: 200 };
        let t = if sbs { Technique::SideBySideIn2D } else { Technique::SlideIn2D };
        let l = CanvasLayout::new(t, canvas).unwrap();
        let l = if sbs { l } else { l.extend(divider).unwrap() };
        if let Ok(s) = l.swap() {
            prop_assert_eq!(s.swap().unwrap(), l);
        }
    }

    #[test]
    fn committed_slide_keeps_fraction(layout in vr_layout(), delta in -720.0..720.0f64) {
        for v in VideoId::BOTH {
            let slid = layout.slide(v, delta, true);
            prop_assert!((slid.area(v).fraction() - layout.area(v).fraction()).abs() < 1e-12);
            prop_assert!(slid.pending_slide().is_none());
        }
    }

    #[test]
    fn extend_then_restore(layout in vr_layout(), az in azimuth(), end in any::<bool>()) {
        let edge = if end { Edge::End } else { Edge::Start };
        let old = layout.area(VideoId::A).edge(edge);
        let restored = layout.extend(VideoId::A, edge, az).extend(VideoId::A, edge, old);
        prop_assert_eq!(restored, layout);
    }

    #[test]
    fn front_wins_where_both_lunes_cover(layout in vr_layout(), d in direction(90.0)) {
        let az = d.yaw();
        let both = VideoId::BOTH.iter().all(|v| layout.area(*v).contains(az));
        let shown = layout.visible_layer(d, &PeekState::Off);
        if both {
            prop_assert_eq!(shown, Some(layout.front()));
        }
        if let Some(v) = shown {
            prop_assert!(layout.area(v).contains(az));
        }
    }

    #[test]
    fn merge_keeps_samples(track in track()) {
        let merged = track.merge_segments();
        let before: Vec<_> = track.samples().copied().collect();
        let after: Vec<_> = merged.samples().copied().collect();
        prop_assert_eq!(before, after);
        prop_assert_eq!(merged.merge_segments(), merged.clone());
    }

    #[test]
    fn roi_at_is_continuous_within_runs(track in track(), f in 0.0..1.0f64) {
        for run in track.runs() {
            let (t0, t1) = (run[0].t, run[run.len() - 1].t);
            let t = t0 + (t1 - t0) * f;
            let eps = 1e-7;
            if t + eps > t1 {
                continue;
            }
            let a = track.roi_at(t).unwrap().expect("inside a run");
            let b = track.roi_at(t + eps).unwrap().expect("inside a run");
            prop_assert!(angular_distance(a.center, b.center) < 1e-3);
        }
    }

    #[test]
    fn trajectory_time_encodings(track in track(), t_now in 0.0..30.0f64, shift in 0.0..5.0f64) {
        let cfg = PlanetMapConfig::nadir(100.0).unwrap();
        let colors: Vec<f64> = track
            .trajectory_2d(&cfg)
            .into_iter()
            .flatten()
            .map(|p| match p.time {
                TimeEncoding::Color(f) => f,
                TimeEncoding::Depth(_) => panic!("2D uses color"),
            })
            .collect();
        prop_assert!(colors.windows(2).all(|w| w[0] <= w[1]));

        let depth = |now: f64| -> Vec<f64> {
            track
                .trajectory_vr(now, &cfg)
                .into_iter()
                .flatten()
                .map(|p| match p.time {
                    TimeEncoding::Depth(d) => d,
                    TimeEncoding::Color(_) => panic!("VR uses depth"),
                })
                .collect()
        };
        let (d0, d1) = (depth(t_now), depth(t_now + shift));
        prop_assert!(d0.windows(2).all(|w| w[0] < w[1]));
        for (a, b) in d0.iter().zip(&d1) {
            prop_assert!((a - shift - b).abs() < 1e-9);
        }
    }

    #[test]
    fn script_text_round_trips(seed in any::<u64>(), len in 0usize..40) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let canvas = CanvasSize { width: 640, height: 200 };
        let mut script = Script::new();
        for i in 0..len {
            let cmd = panocmp::fuzz::random_command(&mut rng, canvas, 30.0);
            script.push(i as f64 * 0.25, cmd).unwrap();
        }
        let text = script.to_string();
        let parsed = Script::parse(&text).unwrap();
        prop_assert_eq!(parsed.to_string(), text);
        let cmds: Vec<_> = parsed.entries().iter().map(|e| (e.at, e.command)).collect();
        let orig: Vec<_> = script.entries().iter().map(|e| (e.at, e.command)).collect();
        prop_assert_eq!(cmds, orig);
    }

    #[test]
    fn script_parsing_is_total(text in "\\PC{0,200}") {
        let _ = Script::parse(&text);
    }

    #[test]
    fn track_parsing_is_total(text in "[0-9 .#\\n\\-a-z]{0,200}") {
        let _ = panocmp::roi::parse_roi_track(&text, &panocmp::roi::TrackParseOptions::new(VideoId::B));
    }

    #[test]
    fn replay_is_deterministic(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let technique = Technique::ALL[rng.gen_range(0..Technique::ALL.len())];
        let canvas = CanvasSize { width: 320, height: 100 };
        let engine = Engine::new(EngineConfig::new(technique, [20.0, 25.0]).with_canvas(canvas)).unwrap();
        let mut script = Script::new();
        let mut at = 0.0;
        for _ in 0..30 {
            at += rng.gen_range(0.0..1.5);
            script.push(at, panocmp::fuzz::random_command(&mut rng, canvas, 25.0)).unwrap();
        }
        // commands the technique rejects stop the replay with an error;
        // either way two runs agree
        let a = engine.run_script(&script).map_err(|e| e.to_string());
        let b = engine.run_script(&script).map_err(|e| e.to_string());
        prop_assert_eq!(a, b);
    }
}
