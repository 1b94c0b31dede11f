//! Reconstruction of high-genus triangle meshes from multi-view silhouettes.
//!
//! The library combines two ingredients:
//!
//! * **Topology analysis** — simplicial complexes over Z/2, persistence
//!   pairing with representative-cycle tracing, and handle/tunnel loop
//!   extraction on closed surfaces ([`complex`], [`persistence`], [`loops`]).
//! * **Inverse rendering** — a differentiable soft-silhouette rasterizer with
//!   analytic vertex gradients, a bi-Laplacian-regularized objective with a
//!   triangle-inversion penalty, and an Adam driver ([`render`], [`optim`]).
//!
//! Tunnel loops found by the topology stage guide camera placement
//! ([`camera`]); the combined "collaborative" camera set is what the
//! end-to-end [`pipeline`] evaluates against plain uniform-sphere placement
//! using Chamfer distance and volume IoU ([`metrics`]).

pub mod camera;
pub mod complex;
pub mod error;
pub mod geom;
pub mod gf2;
pub mod loops;
pub mod mesh;
pub mod metrics;
pub mod optim;
pub mod persistence;
pub mod pipeline;
pub mod render;

pub use error::{Error, Result};
