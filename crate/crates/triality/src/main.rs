use triality::cli;

fn main() {
    std::process::exit(cli::run());
}
