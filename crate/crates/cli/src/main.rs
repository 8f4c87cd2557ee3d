// Copyright 2026 The cqed-gate Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    std::process::exit(cqed_gate_cli::run(std::env::args_os()));
}
