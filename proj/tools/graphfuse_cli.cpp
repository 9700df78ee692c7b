#include <iostream>

int main() {
    std::cout << "graphfuse\n";
    return 0;
}
