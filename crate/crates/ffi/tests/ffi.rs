use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use staged_ffi::*;

const TEN: &str = "system line10\ntemperature 1\nglue a strength 1\nglue b strength 1\nglue c strength 1\n\
tile ab e=b w=a\ntile bc e=c w=b\ntile ca e=a w=c\nstage 1\nbin x add ab,bc\nbin y add bc,ca\n\
stage 2\nbin m from x,y\nstage 3\nbin p from m add ab\nbin q from m add ca\noutput p,q\n";

fn last_error() -> String {
    unsafe { CStr::from_ptr(staged_last_error_message()) }.to_string_lossy().into_owned()
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { staged_string_free(s) };
    out
}

#[test]
fn parse_execute_and_read_back() {
    let src = CString::new(TEN).unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { staged_system_parse(src.as_ptr(), &mut sys) }, StagedStatus::Ok);
    let mut m = StagedMetrics::default();
    assert_eq!(unsafe { staged_system_metrics(sys, &mut m) }, StagedStatus::Ok);
    assert_eq!((m.tiles, m.stages, m.bins, m.glues, m.temperature), (3, 3, 2, 3, 1));

    let mut run = ptr::null_mut();
    assert_eq!(unsafe { staged_system_execute(sys, 0, 0, &mut run) }, StagedStatus::Ok);
    assert!(unsafe { staged_execution_is_unique(run) });
    assert_eq!(unsafe { staged_execution_terminal_count(run) }, 1);

    let mut len = 0usize;
    let status = unsafe { staged_execution_terminal_cells(run, 0, ptr::null_mut(), ptr::null_mut(), 0, &mut len) };
    assert_eq!((status, len), (StagedStatus::OutOfRange, 10));
    let (mut xs, mut ys) = (vec![0i32; len], vec![0i32; len]);
    let status = unsafe { staged_execution_terminal_cells(run, 0, xs.as_mut_ptr(), ys.as_mut_ptr(), len, &mut len) };
    assert_eq!(status, StagedStatus::Ok);
    assert_eq!(xs, (0..10).collect::<Vec<_>>());
    assert!(ys.iter().all(|&y| y == 0));

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { staged_execution_render(run, 0, false, &mut text) }, StagedStatus::Ok);
    assert_eq!(take(text).trim_end().chars().count(), 10);
    assert_eq!(unsafe { staged_execution_render(run, 1, false, &mut text) }, StagedStatus::OutOfRange);

    let mut dsl = ptr::null_mut();
    assert_eq!(unsafe { staged_system_serialize(sys, &mut dsl) }, StagedStatus::Ok);
    assert!(take(dsl).starts_with("system line10\n"));
    unsafe {
        staged_execution_free(run);
        staged_system_free(sys);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut sys = ptr::null_mut();
    let bad = CString::new("system s\ntemperature x\n").unwrap();
    assert_eq!(unsafe { staged_system_parse(bad.as_ptr(), &mut sys) }, StagedStatus::Syntax);
    assert!(last_error().starts_with("2:13:"), "{}", last_error());
    let bad = CString::new("system s\ntemperature 1\nglue a strength 0\n").unwrap();
    assert_eq!(unsafe { staged_system_parse(bad.as_ptr(), &mut sys) }, StagedStatus::Semantic);
    assert_eq!(unsafe { staged_system_parse(ptr::null(), &mut sys) }, StagedStatus::NullPointer);
    let bits = CString::new("10110").unwrap();
    assert_eq!(unsafe { staged_gen_crazy_string(bits.as_ptr(), 4, &mut sys) }, StagedStatus::Construction);
    assert!(last_error().contains("budget"));
    let holed = CString::new("###\n#.#\n###\n").unwrap();
    let status = unsafe { staged_gen_from_shape(StagedShapeConstruction::Scale2, holed.as_ptr(), &mut sys) };
    assert_eq!(status, StagedStatus::Construction);
    unsafe { staged_system_free(ptr::null_mut()) };
}

#[test]
fn budget_exhaustion() {
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { staged_gen_line(12, &mut sys) }, StagedStatus::Ok);
    let mut run = ptr::null_mut();
    assert_eq!(unsafe { staged_system_execute(sys, 3, 0, &mut run) }, StagedStatus::Budget);
    assert!(run.is_null());
    unsafe { staged_system_free(sys) };
}

#[test]
fn generators() {
    let mut sys = ptr::null_mut();
    let shape = CString::new("##.\n.##\n").unwrap();
    for kind in [
        StagedShapeConstruction::SpanningTree,
        StagedShapeConstruction::Scale2,
        StagedShapeConstruction::Monotone,
    ] {
        assert_eq!(unsafe { staged_gen_from_shape(kind, shape.as_ptr(), &mut sys) }, StagedStatus::Ok);
        let mut run = ptr::null_mut();
        assert_eq!(unsafe { staged_system_execute(sys, 0, 0, &mut run) }, StagedStatus::Ok);
        assert!(unsafe { staged_execution_is_unique(run) });
        unsafe {
            staged_execution_free(run);
            staged_system_free(sys);
        }
    }
    assert_eq!(unsafe { staged_gen_square_jigsaw(4, &mut sys) }, StagedStatus::Ok);
    unsafe { staged_system_free(sys) };
    assert_eq!(unsafe { staged_gen_counter(1, &mut sys) }, StagedStatus::Ok);
    unsafe { staged_system_free(sys) };
}

/// The generated header is valid C and declares every entry point.
#[test]
fn header_compiles() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/staged.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "staged_system_parse",
        "staged_system_execute",
        "staged_execution_terminal_cells",
        "staged_last_error_message",
        "staged_string_free",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let probe = std::env::temp_dir().join(format!("staged_probe_{}.c", std::process::id()));
    std::fs::write(
        &probe,
        "#include \"staged.h\"\nint main(void) { StagedSystem *s = 0; StagedMetrics m;\n\
         return staged_system_metrics(s, &m) == STAGED_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&probe)
        .output();
    let _ = std::fs::remove_file(&probe);
    match out {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(e) => eprintln!("no C compiler, header syntax not checked: {e}"),
    }
}
