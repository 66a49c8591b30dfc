#include <torbit/cli.hpp>

int main(int argc, char** argv) { return torbit::cli::run(argc, argv); }
