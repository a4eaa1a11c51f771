//! Direct sampling imaging of small dielectric inclusions in 2D.
//!
//! The crate covers the whole pipeline: scene description ([`scene`]),
//! synthetic multistatic response data ([`forward`]), indicator maps and
//! their closed-form limits ([`imaging`]), Jaccard evaluation ([`metrics`])
//! and ingestion of Fresnel-format experimental files ([`fresnel`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod forward;
pub mod fresnel;
pub mod imaging;
pub mod metrics;
pub mod scene;
pub mod specfun;

pub type Complex = num_complex::Complex64;

pub use error::{Error, Result};
pub use forward::{
    add_awgn, assemble_mie_msr, assemble_msr, assemble_msr_with, asymptotic_scattered_field,
    asymptotic_scattered_field_with, mie_cylinder_scattered_field, MsrMatrix, Prefactor, Provenance,
};
pub use fresnel::{parse_fresnel, to_msr, write_fresnel, FresnelGeometry, FresnelRecord, FresnelSchema};
pub use imaging::theory::{plane_wave_bessel_check, psi1_map, psi2_map, psi3_map};
pub use imaging::{
    dsm_multi, dsm_single, dsm_single_with, dsma, inner_product_gamma, kirchhoff, Algorithm, DsmNormalization,
    IndicatorMap, MapMetadata, SteeringVectors,
};
pub use metrics::{exact_map, jaccard, jaccard_curve, threshold_map, JaccardCurve};
pub use scene::{
    make_circle_array, make_direction_set, make_grid, Background, ImagingGrid, IncidentSet, Inhomogeneity, Point,
    Scene, SensorArray, SensorLayout,
};
pub use specfun::{bessel_j0, bessel_y0, green2d};
