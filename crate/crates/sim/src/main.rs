fn main() {
    std::process::exit(dbs_sim::cli::main_with_args(std::env::args_os()));
}
