fn main() -> std::process::ExitCode {
    siegel_jacobi::cli::main()
}
