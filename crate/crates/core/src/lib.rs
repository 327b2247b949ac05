//! Pairwise comparison of two equirectangular 360° videos.
//!
//! The crate models five comparison techniques: sliding and toggling in VR,
//! and sliding, toggling and side-by-side viewing on a 2D canvas. It
//! provides the spherical geometry, the layered display model, ROI tracks,
//! ROI-driven layout presets, a replayable session state machine and a
//! deterministic software compositor.

pub mod bridge;
pub mod compositor;
pub mod display;
pub mod fixture;
pub mod frame;
pub mod fuzz;
pub mod geometry;
pub mod io;
pub mod roi;
pub mod script;
pub mod session;
pub mod solver;

pub use compositor::{RenderOptions, Sources};
pub use display::{CanvasLayout, CanvasSize, Edge, LuneArea, PeekState, Technique, VideoId, VrLayout};
pub use frame::{Frame, Sampling};
pub use geometry::{Direction, EquirectCoord, PlanetMapConfig, Viewport};
pub use roi::{RoiSample, RoiTrack};
pub use script::{Command, Script};
pub use session::{Engine, EngineConfig, SessionState};
