/**
 * The driving-metaphor mode control: a driver seat, a co-pilot seat,
 * and an exit. The parent icon (blue) and robot icon (green) each
 * occupy one position, and only four configurations are meaningful.
 */

import type { Mode } from './types'

export type IconSlot = 'driver' | 'copilot' | 'exit'

export interface SlotConfig {
  parent: IconSlot
  robot: IconSlot
}

const SLOT_TO_MODE: [SlotConfig, Mode][] = [
  [{ parent: 'driver', robot: 'exit' }, 'parent_takeover'],
  [{ parent: 'driver', robot: 'copilot' }, 'parent_led'],
  [{ parent: 'copilot', robot: 'driver' }, 'robot_led'],
  [{ parent: 'exit', robot: 'driver' }, 'robot_takeover'],
]

/**
 * Pure slot-to-mode mapping. Returns null for illegal configurations
 * (shared seats, nobody driving, both at the exit); callers snap the
 * dragged icon back in that case.
 */
export function modeForSlots(config: SlotConfig): Mode | null {
  for (const [slots, mode] of SLOT_TO_MODE) {
    if (slots.parent === config.parent && slots.robot === config.robot) {
      return mode
    }
  }
  return null
}

export function slotsForMode(mode: Mode): SlotConfig {
  const found = SLOT_TO_MODE.find(([, m]) => m === mode)
  if (!found) {
    throw new Error(`unknown mode ${mode}`)
  }
  return { ...found[0] }
}

export function isLegalConfig(config: SlotConfig): boolean {
  return modeForSlots(config) !== null
}
