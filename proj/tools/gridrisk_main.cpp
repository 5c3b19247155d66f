#include "gridrisk/cli.hpp"

int main(int argc, char** argv) { return gridrisk::dispatch(argc, argv); }
