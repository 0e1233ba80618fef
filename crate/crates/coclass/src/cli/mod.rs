pub fn run() -> i32 {
    eprintln!("command-line interface not wired up yet");
    2
}
