fn main() {
    // CLI wiring lands after the library modules are in place.
    eprintln!("homred: not yet wired");
    std::process::exit(2);
}
