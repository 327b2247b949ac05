// Parsing an ROI track and reading it back as minimap trajectories.
//
// cargo run --example roi_trajectory

use panocmp::display::VideoId;
use panocmp::geometry::PlanetMapConfig;
use panocmp::roi::{gradient_color, parse_roi_track, TimeEncoding, TrackParseOptions};

const TRACK: &str = "\
# t yaw pitch width height
0.0  -40  0  20 15
0.5  -35  2  20 15
1.0  -30  4  20 15
# the ROI leaves the frame for two seconds
3.5   10  5  18 14
4.0   15  5  18 14
";

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let opts = TrackParseOptions::new(VideoId::A).with_duration(4.0);
    let track = parse_roi_track(TRACK, &opts)?;
    println!("{} samples in {} runs", track.samples().count(), track.runs().len());

    for t in [0.25, 2.0, 3.75] {
        match track.roi_at(t)? {
            Some(s) => println!("t={t}: ROI at yaw {:.1} pitch {:.1}", s.center.yaw(), s.center.pitch()),
            None => {
                let s = track.nearest_roi(t)?;
                println!("t={t}: no ROI, nearest sample is at t={}", s.t);
            }
        }
    }

    let cfg = PlanetMapConfig::nadir(90.0)?;
    for (i, run) in track.trajectory_2d(&cfg).iter().enumerate() {
        for p in run {
            if let TimeEncoding::Color(f) = p.time {
                println!(
                    "run {i}: map ({:6.1}, {:6.1}) color {:?}",
                    p.map_pos.0,
                    p.map_pos.1,
                    gradient_color(f)
                );
            }
        }
    }

    let depths: Vec<String> = track
        .trajectory_vr(1.0, &cfg)
        .into_iter()
        .flatten()
        .filter_map(|p| match p.time {
            TimeEncoding::Depth(d) => Some(format!("{d:+.1}")),
            TimeEncoding::Color(_) => None,
        })
        .collect();
    println!("depths at t=1: {}", depths.join(" "));

    let merged = track.merge_segments();
    println!("merged: {} runs, {} samples", merged.runs().len(), merged.samples().count());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
