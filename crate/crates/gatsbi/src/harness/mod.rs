//! Training loop, metric computation, fold-wise benchmarking, and ablations.
