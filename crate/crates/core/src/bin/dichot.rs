fn main() -> std::process::ExitCode {
    schreier::cli::main_entry()
}
