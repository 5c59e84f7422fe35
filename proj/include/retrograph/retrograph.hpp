#pragma once

// Everything at once.

#include <retrograph/chemgraph.hpp>
#include <retrograph/orientation.hpp>
#include <retrograph/disconnect.hpp>
#include <retrograph/rewrite.hpp>
#include <retrograph/layers.hpp>
#include <retrograph/retro.hpp>
#include <retrograph/json_io.hpp>
