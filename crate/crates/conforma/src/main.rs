fn main() {
    std::process::exit(conforma::run(std::env::args_os()));
}
