fn main() -> std::process::ExitCode {
    campana::cli::main()
}
