fn main() {
    std::process::exit(evloc::cli::main_entry());
}
