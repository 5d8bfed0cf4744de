fn main() {
    // Die quietly on closed pipes (`doublestate ... | head`) instead of
    // panicking in println!.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(doublestate::cli::run(std::env::args_os()));
}
