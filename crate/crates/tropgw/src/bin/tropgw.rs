fn main() {
    std::process::exit(tropgw::cli::main());
}
