#include "accelode/cli.hpp"

int main(int argc, char** argv) { return accelode::run_cli(argc, argv); }
