#include "cli.hpp"

int main(int argc, char** argv) { return sessbot::cli::run(argc, argv); }
