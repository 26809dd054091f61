fn main() {
    std::process::exit(edgestat::run(std::env::args_os()));
}
