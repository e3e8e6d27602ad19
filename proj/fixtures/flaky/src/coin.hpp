#pragma once

int flip(unsigned seed);
