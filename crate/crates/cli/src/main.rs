fn main() -> std::process::ExitCode {
    lolab_cli::main_entry()
}
