//! C ABI for staged systems: parse or generate a system, execute it, read back terminals.
//!
//! Systems and executions are opaque handles released with their `_free` functions. Every
//! fallible call returns a `StagedStatus` and writes its result through an out pointer; the
//! message of the last failure on the calling thread is available from
//! `staged_last_error_message`. Strings returned to the caller are released with
//! `staged_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use staged_core::constructions;
use staged_core::dsl::render::{render_supertile, Format};
use staged_core::dsl::{parse_shape, parse_system, serialize_system};
use staged_core::engine::ClosureBudget;
use staged_core::staged::{execute, metrics, ExecuteError, Execution, StagedSystem as System};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StagedStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Semantic = 4,
    Budget = 5,
    Construction = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// Constructions that take a shape.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StagedShapeConstruction {
    SpanningTree = 0,
    Scale2 = 1,
    Monotone = 2,
}

/// Complexity of a system.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StagedMetrics {
    pub glues: usize,
    pub tiles: usize,
    pub bins: usize,
    pub stages: usize,
    pub temperature: u32,
}

/// An owned staged system.
pub struct StagedSystem {
    inner: System,
}

/// The result of executing a system.
pub struct StagedExecution {
    tiles: staged_core::assembly::TileSet,
    run: Execution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: StagedStatus, message: impl Into<String>) -> StagedStatus {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("no interior nul"));
    status
}

/// Runs `f`, turning a panic into `StagedStatus::Panic`.
fn guard(f: impl FnOnce() -> StagedStatus) -> StagedStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(StagedStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, StagedStatus> {
    if p.is_null() {
        return Err(fail(StagedStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(StagedStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn emit_system(out: *mut *mut StagedSystem, sys: System) -> StagedStatus {
    *out = Box::into_raw(Box::new(StagedSystem { inner: sys }));
    StagedStatus::Ok
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> StagedStatus {
    *out = CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw();
    StagedStatus::Ok
}

fn construction(e: constructions::ConstructionError) -> StagedStatus {
    fail(StagedStatus::Construction, e.to_string())
}

/// Message of the last failure on this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn staged_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses DSL text into a new system.
///
/// # Safety
/// `source` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn staged_system_parse(source: *const c_char, out: *mut *mut StagedSystem) -> StagedStatus {
    guard(|| {
        if out.is_null() {
            return fail(StagedStatus::NullPointer, "null out pointer");
        }
        let t = match text(source) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_system(t) {
            Ok(sys) => emit_system(out, sys),
            Err(e) => {
                let status = if e.is_syntax() { StagedStatus::Syntax } else { StagedStatus::Semantic };
                fail(status, e.to_string())
            }
        }
    })
}

/// Releases a system; null is ignored.
///
/// # Safety
/// `sys` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn staged_system_free(sys: *mut StagedSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Canonical DSL text of a system.
///
/// # Safety
/// `sys` must be a live system and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn staged_system_serialize(sys: *const StagedSystem, out: *mut *mut c_char) -> StagedStatus {
    guard(|| {
        if sys.is_null() || out.is_null() {
            return fail(StagedStatus::NullPointer, "null argument");
        }
        emit_string(out, serialize_system(&(*sys).inner))
    })
}

/// # Safety
/// `sys` must be a live system and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn staged_system_metrics(sys: *const StagedSystem, out: *mut StagedMetrics) -> StagedStatus {
    guard(|| {
        if sys.is_null() || out.is_null() {
            return fail(StagedStatus::NullPointer, "null argument");
        }
        let m = metrics(&(*sys).inner);
        *out = StagedMetrics {
            glues: m.glue_count,
            tiles: m.tile_count,
            bins: m.bin_count,
            stages: m.stage_count,
            temperature: m.temperature,
        };
        StagedStatus::Ok
    })
}

/// The 1 × n line from three glues.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn staged_gen_line(n: u64, out: *mut *mut StagedSystem) -> StagedStatus {
    guard(|| {
        if out.is_null() {
            return fail(StagedStatus::NullPointer, "null out pointer");
        }
        emit_system(out, constructions::gen_line(n))
    })
}

/// The n × n square from jigsaw cuts.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn staged_gen_square_jigsaw(n: u32, out: *mut *mut StagedSystem) -> StagedStatus {
    guard(|| {
        if out.is_null() {
            return fail(StagedStatus::NullPointer, "null out pointer");
        }
        match constructions::gen_square_jigsaw(n) {
            Ok(sys) => emit_system(out, sys),
            Err(e) => construction(e),
        }
    })
}

/// A construction for the shape given as `#`/`.` rows.
///
/// # Safety
/// `shape` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn staged_gen_from_shape(
    kind: StagedShapeConstruction,
    shape: *const c_char,
    out: *mut *mut StagedSystem,
) -> StagedStatus {
    guard(|| {
        if out.is_null() {
            return fail(StagedStatus::NullPointer, "null out pointer");
        }
        let shape = match text(shape).map(parse_shape) {
            Ok(Ok(s)) => s,
            Ok(Err(e)) => return fail(StagedStatus::Syntax, e.to_string()),
            Err(s) => return s,
        };
        let sys = match kind {
            StagedShapeConstruction::SpanningTree => Ok(constructions::gen_spanning_tree(&shape)),
            StagedShapeConstruction::Scale2 => constructions::gen_scale2(&shape),
            StagedShapeConstruction::Monotone => constructions::gen_monotone(&shape),
        };
        match sys {
            Ok(sys) => emit_system(out, sys),
            Err(e) => construction(e),
        }
    })
}

/// The binary counter over strings of length 2^k.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn staged_gen_counter(k: u32, out: *mut *mut StagedSystem) -> StagedStatus {
    guard(|| {
        if out.is_null() {
            return fail(StagedStatus::NullPointer, "null out pointer");
        }
        match constructions::gen_counter(k) {
            Ok(sys) => emit_system(out, sys),
            Err(e) => construction(e),
        }
    })
}

/// A bit string on the north face of macro tiles, mixed with `bins` bins.
///
/// # Safety
/// `bits` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn staged_gen_crazy_string(
    bits: *const c_char,
    bins: usize,
    out: *mut *mut StagedSystem,
) -> StagedStatus {
    guard(|| {
        if out.is_null() {
            return fail(StagedStatus::NullPointer, "null out pointer");
        }
        let bits = match text(bits) {
            Ok(b) => b,
            Err(s) => return s,
        };
        match constructions::gen_crazy_string(bits, bins) {
            Ok(sys) => emit_system(out, sys),
            Err(e) => construction(e),
        }
    })
}

/// Executes a system; zero budgets select the defaults.
///
/// # Safety
/// `sys` must be a live system and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn staged_system_execute(
    sys: *const StagedSystem,
    max_supertile_size: usize,
    max_distinct_supertiles: usize,
    out: *mut *mut StagedExecution,
) -> StagedStatus {
    guard(|| {
        if sys.is_null() || out.is_null() {
            return fail(StagedStatus::NullPointer, "null argument");
        }
        let d = ClosureBudget::default();
        let budget = ClosureBudget {
            max_supertile_size: if max_supertile_size == 0 { d.max_supertile_size } else { max_supertile_size },
            max_distinct_supertiles: if max_distinct_supertiles == 0 {
                d.max_distinct_supertiles
            } else {
                max_distinct_supertiles
            },
        };
        let sys = &(*sys).inner;
        match execute(sys, budget) {
            Ok(run) if run.output.complete => {
                *out = Box::into_raw(Box::new(StagedExecution { tiles: sys.tiles.clone(), run }));
                StagedStatus::Ok
            }
            Ok(_) => fail(StagedStatus::Budget, "output bin did not close within the budget"),
            Err(e @ ExecuteError::Invalid(_)) => fail(StagedStatus::Semantic, e.to_string()),
            Err(e) => fail(StagedStatus::Budget, e.to_string()),
        }
    })
}

/// Releases an execution; null is ignored.
///
/// # Safety
/// `run` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn staged_execution_free(run: *mut StagedExecution) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Number of terminal supertiles in the output bin; 0 for null.
///
/// # Safety
/// `run` must be null or a live execution.
#[no_mangle]
pub unsafe extern "C" fn staged_execution_terminal_count(run: *const StagedExecution) -> usize {
    run.as_ref().map_or(0, |r| r.run.output.terminal.len())
}

/// Whether the output bin produces exactly one terminal supertile; false for null.
///
/// # Safety
/// `run` must be null or a live execution.
#[no_mangle]
pub unsafe extern "C" fn staged_execution_is_unique(run: *const StagedExecution) -> bool {
    run.as_ref().is_some_and(|r| r.run.output.unique())
}

/// Copies the cell coordinates of terminal `index` into `xs`/`ys` (capacity `cap`) and stores
/// the cell count in `len`; with too small a buffer only `len` is written.
///
/// # Safety
/// `run` must be a live execution, `len` valid, and `xs`/`ys` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn staged_execution_terminal_cells(
    run: *const StagedExecution,
    index: usize,
    xs: *mut i32,
    ys: *mut i32,
    cap: usize,
    len: *mut usize,
) -> StagedStatus {
    guard(|| {
        if run.is_null() || len.is_null() {
            return fail(StagedStatus::NullPointer, "null argument");
        }
        let r = &*run;
        let Some(t) = r.run.output.terminal.get(index) else {
            return fail(StagedStatus::OutOfRange, format!("no terminal {index}"));
        };
        *len = t.size();
        if cap < t.size() {
            return fail(StagedStatus::OutOfRange, format!("need room for {} cells", t.size()));
        }
        if xs.is_null() || ys.is_null() {
            return fail(StagedStatus::NullPointer, "null cell buffer");
        }
        for (i, p) in t.positions().enumerate() {
            *xs.add(i) = p.x;
            *ys.add(i) = p.y;
        }
        StagedStatus::Ok
    })
}

/// ASCII (or SVG when `svg` is true) picture of terminal `index`.
///
/// # Safety
/// `run` must be a live execution and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn staged_execution_render(
    run: *const StagedExecution,
    index: usize,
    svg: bool,
    out: *mut *mut c_char,
) -> StagedStatus {
    guard(|| {
        if run.is_null() || out.is_null() {
            return fail(StagedStatus::NullPointer, "null argument");
        }
        let r = &*run;
        let Some(t) = r.run.output.terminal.get(index) else {
            return fail(StagedStatus::OutOfRange, format!("no terminal {index}"));
        };
        let format = if svg { Format::Svg } else { Format::Ascii };
        emit_string(out, render_supertile(t, &r.tiles, format))
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn staged_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
