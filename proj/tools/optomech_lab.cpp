#include <cstdio>

int main() {
    std::puts("optomech-lab: placeholder");
    return 0;
}
