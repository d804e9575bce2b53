//! Tables and figures written at the end of a run.

pub mod svg;
pub mod tables;

pub use svg::{
    plot_bars, plot_scatter, render_bars, render_pair_distances, render_radius_pairs, render_scatter, Bar, BarGroup,
    PairStyle, SenseColorScheme, DISTANCE_STYLE, RADIUS_STYLE,
};
pub use tables::VarianceRow;
