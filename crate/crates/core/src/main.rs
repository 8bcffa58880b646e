fn main() {
    std::process::exit(lande_spin::cli::run());
}
