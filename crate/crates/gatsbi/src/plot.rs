//! SVG rendering of scenes, forecasts, and uncertainty.
