fn main() -> std::process::ExitCode {
    urm::cli::main()
}
