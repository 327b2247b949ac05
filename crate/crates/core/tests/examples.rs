//! Every example runs to completion.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run().expect(concat!(stringify!($name), " example should run"));
        }
    };
}

example!(geometry_fov);
example!(lune_layouts);
example!(roi_trajectory);
example!(solvers);
example!(session_replay);
example!(render_canvas);
example!(render_vr);
example!(minimap);
example!(web_bridge);
