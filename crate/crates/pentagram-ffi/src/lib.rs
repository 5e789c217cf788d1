//! C ABI for the pentagram map laboratory.
//!
//! Polygons are opaque handles created from seeded generators, coordinate
//! arrays, or polygon-file JSON; every fallible call returns a
//! [`PentagramStatus`] and leaves a thread-local message retrievable with
//! [`pentagram_last_error`]. Complex arrays are interleaved
//! `[re0, im0, re1, im1, ...]`.
//!
//! The generated header lives at `include/pentagram.h`.
//!
//! Safety: the `unsafe` functions require the usual C contract — handle
//! pointers come from this library and are not used after free, buffers
//! have the stated capacity, strings are NUL-terminated.

use pentagram::coords::XYCoords;
use pentagram::error::Error;
use pentagram::files::{LoadedState, PolygonFile};
use pentagram::num::C64;
use pentagram::spectral;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PentagramStatus {
    Ok = 0,
    /// Null pointer, malformed UTF-8/JSON, or an out-of-range argument.
    InvalidArgument = 1,
    /// The requested object is degenerate (map undefined, non-generic data).
    Degenerate = 2,
    /// The operation needs a structure this polygon lacks (e.g. `(a, b)`
    /// coordinates when `n` is divisible by 3).
    Unsupported = 3,
    /// The output buffer is too small.
    BufferTooSmall = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> PentagramStatus {
    set_error(&err.to_string());
    match err {
        Error::UnsupportedN(..) | Error::IndivisibilityViolated(_) => PentagramStatus::Unsupported,
        e if e.is_degeneracy() => PentagramStatus::Degenerate,
        Error::InvalidFile(_) | Error::Io(_) => PentagramStatus::InvalidArgument,
        _ => PentagramStatus::Degenerate,
    }
}

/// An opaque polygon handle: the state plus its coordinate kind.
pub struct PentagramPolygon {
    state: LoadedState,
}

/// Message describing the most recent error on this thread. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pentagram_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Seeded random twisted polygon with `n` vertices (`kind` picks the
/// coordinates: 0 = `(a, b)` when `n` is not divisible by 3, 1 = `(x, y)`,
/// 2 = vertex chain). Writes the new handle to `out`.
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_random(
    n: usize,
    seed: u64,
    kind: u32,
    out: *mut *mut PentagramPolygon,
) -> PentagramStatus {
    if out.is_null() || n < 4 {
        set_error("need a non-null output pointer and n >= 4");
        return PentagramStatus::InvalidArgument;
    }
    let state = match kind {
        0 => {
            if n % 3 == 0 {
                set_error("(a, b) coordinates need n not divisible by 3");
                return PentagramStatus::Unsupported;
            }
            LoadedState::Ab(pentagram::rng::random_ab(n, seed))
        }
        1 => LoadedState::Xy(pentagram::rng::random_xy(n, seed)),
        2 => match pentagram::rng::random_chain(n, seed) {
            Ok(chain) => LoadedState::Chain(chain),
            Err(e) => return status_of(&e),
        },
        _ => {
            set_error("kind must be 0 (ab), 1 (xy), or 2 (vertices)");
            return PentagramStatus::InvalidArgument;
        }
    };
    unsafe { *out = Box::into_raw(Box::new(PentagramPolygon { state })) };
    PentagramStatus::Ok
}

/// Seeded random closed polygon (`n >= 5`; plane vertices, identity
/// monodromy).
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_random_closed(
    n: usize,
    seed: u64,
    out: *mut *mut PentagramPolygon,
) -> PentagramStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PentagramStatus::InvalidArgument;
    }
    match pentagram::rng::random_closed_chain(n, seed) {
        Ok(chain) => {
            unsafe { *out = Box::into_raw(Box::new(PentagramPolygon { state: LoadedState::Chain(chain) })) };
            PentagramStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Polygon from interleaved `(x, y)` coordinates: `x` values first
/// (`2n` doubles), then `y` values (`2n` doubles).
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_from_xy(
    n: usize,
    data: *const f64,
    out: *mut *mut PentagramPolygon,
) -> PentagramStatus {
    if out.is_null() || data.is_null() || n < 4 {
        set_error("need non-null pointers and n >= 4");
        return PentagramStatus::InvalidArgument;
    }
    let slice = unsafe { std::slice::from_raw_parts(data, 4 * n) };
    let x: Vec<C64> = (0..n).map(|i| C64::new(slice[2 * i], slice[2 * i + 1])).collect();
    let y: Vec<C64> = (0..n)
        .map(|i| C64::new(slice[2 * n + 2 * i], slice[2 * n + 2 * i + 1]))
        .collect();
    match XYCoords::new(x, y) {
        Ok(xy) => {
            unsafe { *out = Box::into_raw(Box::new(PentagramPolygon { state: LoadedState::Xy(xy) })) };
            PentagramStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Polygon from polygon-file JSON (same schema as the CLI files).
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_from_json(
    json: *const c_char,
    out: *mut *mut PentagramPolygon,
) -> PentagramStatus {
    if out.is_null() || json.is_null() {
        set_error("null pointer");
        return PentagramStatus::InvalidArgument;
    }
    let text = match unsafe { CStr::from_ptr(json) }.to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("JSON is not valid UTF-8");
            return PentagramStatus::InvalidArgument;
        }
    };
    let state = PolygonFile::from_json(text).and_then(|f| f.load());
    match state {
        Ok(state) => {
            unsafe { *out = Box::into_raw(Box::new(PentagramPolygon { state })) };
            PentagramStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Serializes the polygon back to file JSON; free with
/// [`pentagram_string_free`].
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_to_json(
    polygon: *const PentagramPolygon,
    out: *mut *mut c_char,
) -> PentagramStatus {
    let Some(polygon) = (unsafe { polygon.as_ref() }) else {
        set_error("null polygon");
        return PentagramStatus::InvalidArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return PentagramStatus::InvalidArgument;
    }
    let file = match &polygon.state {
        LoadedState::Ab(ab) => PolygonFile::from_ab(ab, None),
        LoadedState::Xy(xy) => PolygonFile::from_xy(xy, None),
        LoadedState::Chain(chain) => PolygonFile::from_chain(chain, None),
    };
    let json = CString::new(file.to_json()).unwrap_or_default();
    unsafe { *out = json.into_raw() };
    PentagramStatus::Ok
}

/// Frees a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn pentagram_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe { drop(CString::from_raw(s)) };
    }
}

/// Frees a polygon handle.
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_free(polygon: *mut PentagramPolygon) {
    if !polygon.is_null() {
        unsafe { drop(Box::from_raw(polygon)) };
    }
}

/// Number of vertices.
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_n(polygon: *const PentagramPolygon) -> usize {
    unsafe { polygon.as_ref() }.map_or(0, |p| p.state.n())
}

/// True when the polygon is closed (scalar monodromy).
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_is_closed(polygon: *const PentagramPolygon) -> bool {
    unsafe { polygon.as_ref() }.is_some_and(|p| p.state.is_closed())
}

/// One pentagram step, in the polygon's own representation.
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_step(
    polygon: *const PentagramPolygon,
    out: *mut *mut PentagramPolygon,
) -> PentagramStatus {
    let Some(polygon) = (unsafe { polygon.as_ref() }) else {
        set_error("null polygon");
        return PentagramStatus::InvalidArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return PentagramStatus::InvalidArgument;
    }
    let next = match &polygon.state {
        LoadedState::Ab(ab) => ab.pentagram().map(LoadedState::Ab),
        LoadedState::Xy(xy) => xy.pentagram().map(LoadedState::Xy),
        LoadedState::Chain(chain) => chain.pentagram_step().map(LoadedState::Chain),
    };
    match next {
        Ok(state) => {
            unsafe { *out = Box::into_raw(Box::new(PentagramPolygon { state })) };
            PentagramStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// The `(x, y)` coordinates, interleaved as in
/// [`pentagram_polygon_from_xy`]; `buffer` must hold `4n` doubles.
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_xy(
    polygon: *const PentagramPolygon,
    buffer: *mut f64,
    capacity: usize,
) -> PentagramStatus {
    let Some(polygon) = (unsafe { polygon.as_ref() }) else {
        set_error("null polygon");
        return PentagramStatus::InvalidArgument;
    };
    let n = polygon.state.n();
    if buffer.is_null() {
        set_error("null buffer");
        return PentagramStatus::InvalidArgument;
    }
    if capacity < 4 * n {
        set_error("buffer needs 4n doubles");
        return PentagramStatus::BufferTooSmall;
    }
    match polygon.state.xy() {
        Ok(xy) => {
            let slice = unsafe { std::slice::from_raw_parts_mut(buffer, 4 * n) };
            for i in 0..n {
                slice[2 * i] = xy.x[i].re;
                slice[2 * i + 1] = xy.x[i].im;
                slice[2 * n + 2 * i] = xy.y[i].re;
                slice[2 * n + 2 * i + 1] = xy.y[i].im;
            }
            PentagramStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Integrals of motion: writes `I_0..I_q`, `J_0..J_q`, then the rescaling
/// constant `C`, interleaved re/im — `2(2(q+1) + 1)` doubles, with
/// `q = n/2`. `written` receives the number of doubles stored.
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_invariants(
    polygon: *const PentagramPolygon,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> PentagramStatus {
    let Some(polygon) = (unsafe { polygon.as_ref() }) else {
        set_error("null polygon");
        return PentagramStatus::InvalidArgument;
    };
    if buffer.is_null() || written.is_null() {
        set_error("null pointer");
        return PentagramStatus::InvalidArgument;
    }
    let inv = match state_invariants(&polygon.state) {
        Ok(inv) => inv,
        Err(e) => return status_of(&e),
    };
    let needed = 2 * (2 * (inv.q + 1) + 1);
    if capacity < needed {
        set_error("buffer too small for the invariants");
        return PentagramStatus::BufferTooSmall;
    }
    let slice = unsafe { std::slice::from_raw_parts_mut(buffer, needed) };
    let mut cursor = 0usize;
    for value in inv.i.iter().chain(inv.j.iter()).chain(std::iter::once(&inv.c)) {
        slice[cursor] = value.re;
        slice[cursor + 1] = value.im;
        cursor += 2;
    }
    unsafe { *written = needed };
    PentagramStatus::Ok
}

/// Genus of the spectral curve (and whether the closed-polygon stratum was
/// detected).
#[no_mangle]
pub unsafe extern "C" fn pentagram_polygon_genus(
    polygon: *const PentagramPolygon,
    genus: *mut usize,
    closed: *mut bool,
) -> PentagramStatus {
    let Some(polygon) = (unsafe { polygon.as_ref() }) else {
        set_error("null polygon");
        return PentagramStatus::InvalidArgument;
    };
    if genus.is_null() || closed.is_null() {
        set_error("null output pointer");
        return PentagramStatus::InvalidArgument;
    }
    let curve = state_invariants(&polygon.state).and_then(|inv| spectral::branch_points(&inv));
    match curve {
        Ok(curve) => {
            unsafe {
                *genus = curve.genus;
                *closed = curve.closed;
            }
            PentagramStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

fn state_invariants(state: &LoadedState) -> Result<spectral::SpectralInvariants, Error> {
    match state {
        LoadedState::Ab(ab) => spectral::invariants_ab(ab),
        LoadedState::Xy(xy) => spectral::invariants_xy(xy, spectral::CubeRootPolicy::Principal),
        LoadedState::Chain(chain) => spectral::invariants_from_chain(chain),
    }
}
