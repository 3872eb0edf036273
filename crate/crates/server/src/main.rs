fn main() -> std::process::ExitCode {
    lifelog_server::cli::main()
}
