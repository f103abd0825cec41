#pragma once

#define WEALTHSIM_VERSION "1.0.0"
