// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(chandisc::cli::main_entry());
}
