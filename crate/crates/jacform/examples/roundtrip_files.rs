//! File-format round trip: build a theta series, write it to disk, read it
//! back bit-exactly, and decompose a vector-valued form into a component
//! file.
//!
//! ```bash
//! cargo run --example roundtrip_files
//! ```

use jacform::io;
use jacform::nearly::{FourierPoly, NearlyHoloElt};
use jacform::split::vv_decompose;
use jacform::theta::{theta_series, LatticeSpec};

fn main() -> jacform::Result<()> {
    let dir = std::env::temp_dir().join("jacform-example");
    std::fs::create_dir_all(&dir)?;

    // Theta series to disk and back.
    let theta = theta_series(&LatticeSpec::e8(&[0, 2])?, 3)?;
    let path = dir.join("theta-e8-h2.json");
    std::fs::write(&path, io::serialize_form(&theta))?;
    let back = io::deserialize_form(&std::fs::read_to_string(&path)?, true)?;
    println!(
        "theta series: {} modes written to {} and re-read {}",
        theta.coeffs.num_modes(),
        path.display(),
        if back == theta { "bit-exactly" } else { "WRONG" }
    );

    // A vector-valued form assembled from the theta data, decomposed into
    // a component-tuple file.
    let mut fp = FourierPoly::new(1, 1, 1);
    let chi = theta_series(&LatticeSpec::e8(&[0])?, 3)?;
    for (mode, value) in chi.coeffs.modes() {
        fp.insert(
            mode.clone(),
            jacform::sympow::SymPoly::monomial(1, 1, vec![1], value.coeff(&[0]))?,
        )?;
    }
    let phi = NearlyHoloElt::from_fourier(4, chi.index.clone(), fp)?;
    let tuple = vv_decompose(&phi)?;
    let tuple_path = dir.join("decomposition.json");
    std::fs::write(&tuple_path, io::serialize_tuple(&tuple))?;
    println!(
        "vector-valued decomposition with {} levels written to {}",
        tuple.parts.len(),
        tuple_path.display()
    );

    // The same modes survive a nearly holomorphic round trip.
    let heat_moved = jacform::maass::heat(
        &NearlyHoloElt::from_fourier(chi.k, chi.index.clone(), chi.coeffs.clone())?,
    )?;
    let text = io::serialize_nearly(&heat_moved);
    let back = io::deserialize_nearly(&text)?;
    println!(
        "nearly holomorphic element (heat image) round trip: {}",
        if back == heat_moved { "bit-exact" } else { "WRONG" }
    );
    Ok(())
}
