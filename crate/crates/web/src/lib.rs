//! wasm-bindgen surface for the static demo page in `www/`.

mod demo;

pub use demo::{infer, to_rgba, Session, LAYERS};

use wasm_bindgen::prelude::*;
use wfpsnr::fuzzy::Orientation;

fn js_err(e: wfpsnr::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn orientation(name: &str) -> Result<Orientation, JsError> {
    name.parse().map_err(js_err)
}

#[wasm_bindgen]
pub struct Demo {
    session: Session,
}

#[wasm_bindgen]
impl Demo {
    /// Session on the bundled synthetic image.
    #[wasm_bindgen(constructor)]
    pub fn new(orientation_name: &str) -> Result<Demo, JsError> {
        let session = Session::synthetic(orientation(orientation_name)?).map_err(js_err)?;
        Ok(Demo { session })
    }

    /// Session on a user-supplied binary PGM.
    #[wasm_bindgen(js_name = fromPgm)]
    pub fn from_pgm(bytes: &[u8], orientation_name: &str) -> Result<Demo, JsError> {
        let session = Session::from_pgm(bytes, orientation(orientation_name)?).map_err(js_err)?;
        Ok(Demo { session })
    }

    #[wasm_bindgen(getter)]
    pub fn width(&self) -> usize {
        self.session.reference().width()
    }

    #[wasm_bindgen(getter)]
    pub fn height(&self) -> usize {
        self.session.reference().height()
    }

    #[wasm_bindgen(js_name = referenceRgba)]
    pub fn reference_rgba(&self) -> Vec<u8> {
        to_rgba(self.session.reference())
    }

    /// `weights`, `saliency`, `edge`, `intensity` or `fuzzy` as RGBA.
    #[wasm_bindgen(js_name = layerRgba)]
    pub fn layer_rgba(&self, name: &str) -> Result<Vec<u8>, JsError> {
        self.session.layer(name).map(|img| to_rgba(&img)).map_err(js_err)
    }

    /// Region mask (`important`, `non-important`, `all`) as RGBA.
    #[wasm_bindgen(js_name = regionRgba)]
    pub fn region_rgba(&self, name: &str) -> Result<Vec<u8>, JsError> {
        self.session
            .region(name)
            .map(|m| to_rgba(&m.to_image()))
            .map_err(js_err)
    }

    pub fn attack(&self, kind: &str, param: f64, region: &str, seed: u32) -> Result<AttackOutcome, JsError> {
        let (img, report) = self.session.attack(kind, param, region, seed as u64).map_err(js_err)?;
        Ok(AttackOutcome {
            rgba: to_rgba(&img),
            report: report.to_json(),
        })
    }
}

#[wasm_bindgen]
pub struct AttackOutcome {
    rgba: Vec<u8>,
    report: String,
}

#[wasm_bindgen]
impl AttackOutcome {
    #[wasm_bindgen(getter)]
    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }

    /// Score report JSON; infinities appear as `"inf"`.
    #[wasm_bindgen(getter)]
    pub fn report(&self) -> String {
        self.report.clone()
    }
}

/// Crisp importance of one (saliency, edge, intensity) triple in `[0, 1]³`.
#[wasm_bindgen(js_name = inferImportance)]
pub fn infer_importance(saliency: f64, edge: f64, intensity: f64) -> Result<f64, JsError> {
    infer(saliency, edge, intensity).map_err(js_err)
}
