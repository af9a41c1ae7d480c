use std::io;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("NMF_CERTIFY_LOG")).init();
    let code = nmf_certify::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
