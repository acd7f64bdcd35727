//! Fusion of physics and social embeddings, trajectory decoding, losses,
//! and mixture sampling.
