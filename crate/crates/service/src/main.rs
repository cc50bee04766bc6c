use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;

use clap::Parser;
use entrofy_service::{router, AppState};

#[derive(Parser, Debug)]
#[command(name = "entrofy-service", version, about = "Local HTTP backend for entrofy")]
struct Args {
    /// Directory holding uploaded datasets and finished jobs
    #[arg(long, default_value = "entrofy-data")]
    data_dir: PathBuf,
    #[arg(long, default_value_t = 8731)]
    port: u16,
    /// Address to bind; loopback unless set
    #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
    bind: IpAddr,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let args = Args::parse();
    let state = AppState::open(&args.data_dir)?;
    let addr = SocketAddr::new(args.bind, args.port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!(
        "entrofy-service listening on http://{} (data in {})",
        listener.local_addr()?,
        args.data_dir.display()
    );
    axum::serve(listener, router(state)).await
}
